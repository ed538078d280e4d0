use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn procure(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_procure"))
        .args(args)
        .env_remove("PROCURE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("procure-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn gen_synthetic_writes_market() {
    let dir = scratch("gen");
    let out = dir.join("m.csv");
    let o = procure(&[
        "gen",
        "synthetic",
        "--dist",
        "normal:20,5",
        "--n",
        "1000",
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# seed=7 "));
    assert_eq!(lines[1], "cost,utility");
    assert_eq!(lines.len(), 1002);
}

#[test]
fn one_shot_bench_prints_single_ratio() {
    let dir = scratch("oneshot");
    let market = dir.join("m.csv");
    fs::write(&market, "cost,utility\n1,1\n2,1\n").unwrap();
    let o = procure(&[
        "bench",
        "--mechanism",
        "greedy",
        "--market",
        market.to_str().unwrap(),
        "--budget",
        "2",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().nth(1), Some("0.888889"));
}

#[test]
fn bench_is_deterministic_and_thread_independent() {
    let args = [
        "bench",
        "--dist",
        "exp:20",
        "--n",
        "200",
        "--budget",
        "2000",
        "--runs",
        "6",
        "--no-timing",
        "--seed",
        "11",
    ];
    let a = procure(&args);
    let b = procure(&[&args[..], &["--threads", "1"]].concat());
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("mechanism,instance,runs,mean_ratio"));
}

#[test]
fn seed_precedence_flag_file_env() {
    let dir = scratch("seed");
    let cfg = dir.join("run.toml");
    fs::write(&cfg, "seed = 5\nsamples = 3\n").unwrap();
    let run = |extra: &[&str], env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_procure"));
        c.args(["verify", "--property", "lambert-inverse"])
            .args(extra);
        match env {
            Some(v) => c.env("PROCURE_SEED", v),
            None => c.env_remove("PROCURE_SEED"),
        };
        let o = c.output().unwrap();
        stdout(&o).lines().next().unwrap().to_string()
    };
    let cfg = cfg.to_str().unwrap();
    assert_eq!(run(&[], None), "# seed=42 command=verify");
    assert_eq!(run(&[], Some("9")), "# seed=9 command=verify");
    assert_eq!(
        run(&["--config", cfg], Some("9")),
        "# seed=5 command=verify"
    );
    assert_eq!(
        run(&["--config", cfg, "--seed", "1"], Some("9")),
        "# seed=1 command=verify"
    );
}

#[test]
fn verify_targeted_and_errors() {
    let o = procure(&["verify", "--property", "agn-payment", "--samples", "1000"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS agn-payment"));

    let o = procure(&[
        "verify",
        "--property",
        "instance-optimality",
        "--n",
        "50",
        "--seed",
        "3",
        "--samples",
        "10",
    ]);
    assert!(o.status.success());

    let o = procure(&["verify", "--property", "nope"]);
    assert!(!o.status.success());
}

#[test]
fn adversarial_generators_emit_budgets() {
    let o = procure(&["gen", "agn-hard", "--budgets", "1,2.5,6.25", "--n", "50"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let budgets = text.lines().find(|l| l.starts_with("# budget=")).unwrap();
    assert_eq!(
        budgets.trim_start_matches("# budget=").split(',').count(),
        3
    );

    let dir = scratch("lb");
    let out = dir.join("lb.csv");
    let o = procure(&[
        "gen",
        "lower-bound",
        "--m",
        "8",
        "--n",
        "20",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let side = fs::read_to_string(dir.join("lb.budgets.csv")).unwrap();
    assert_eq!(side.lines().filter(|l| l.starts_with("budget,")).count(), 8);
}

#[test]
fn ratio_command_and_bad_input() {
    let dir = scratch("ratio");
    let market = dir.join("m.csv");
    fs::write(&market, "cost,utility\n1,1\n1,1\n").unwrap();
    let o = procure(&[
        "ratio",
        "--mechanism",
        "cutoff",
        "--market",
        market.to_str().unwrap(),
        "--budget",
        "2",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("cutoff,2,2.000000,2.000000,2.000000,1.000000"));

    fs::write(&market, "cost,utility\n1,zero\n").unwrap();
    let o = procure(&[
        "ratio",
        "--market",
        market.to_str().unwrap(),
        "--budget",
        "2",
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn smoothed_single_and_inline() {
    let o = procure(&["smoothed", "--preset", "single", "--restarts", "4"]);
    assert!(o.status.success());
    let total = stdout(&o)
        .lines()
        .find(|l| l.starts_with("total,"))
        .unwrap()
        .to_string();
    let ratio: f64 = total.split(',').nth(7).unwrap().parse().unwrap();
    assert!((ratio - 0.632).abs() < 0.002);

    let o = procure(&["smoothed", "--budgets", "0.5:1,1:1", "--restarts", "4"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o)
            .lines()
            .filter(|l| l.starts_with("budget,"))
            .count(),
        2
    );

    let o = procure(&["smoothed", "--budgets", "-1:1"]);
    assert!(!o.status.success());
}

#[test]
fn two_budget_sweep_has_99_rows() {
    let dir = scratch("sweep");
    let out = dir.join("fig3.csv");
    let o = procure(&[
        "smoothed",
        "--preset",
        "two-budget-sweep",
        "--restarts",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(2)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 99);
    let limit = 1.0 - (-1.0f64).exp();
    assert!(rows.iter().all(|&(_, r)| r >= limit - 1e-6));
    assert!(rows[49].1 > limit + 1e-4);
}
