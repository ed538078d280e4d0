//! Command-line driver: argument definitions and the `bench`, `smoothed`,
//! `gen`, `ratio` and `verify` commands.

pub mod config;

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use procure::bench::{self, ExperimentSpec, InstanceSpec, FIGURE1_RUNS, TABLE1_RUNS};
use procure::instances::{
    gen_agn_hard, gen_lower_bound_market, gen_synthetic, CostDistribution, GeometricMarketSpec,
};
use procure::knapsack::non_ic_optimum;
use procure::smoothed::{self, BudgetDistribution, OptimizeOptions, SmoothedResult};
use procure::verify::{self, Property, VerifyOptions};
use procure::{competitive_ratio, Market, MechanismKind, RsGreedyParams};

pub use config::{resolve_seed, Config, DEFAULT_SEED, SEED_ENV};

/// Number of `ρ` values in the two-budget sweep, `0.01, 0.02, …, 0.99`.
pub const SWEEP_POINTS: usize = 99;

#[derive(Debug, Parser)]
#[command(
    name = "procure",
    version,
    about = "Budget-feasible procurement experiments"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Top-level seed [default: config `seed`, then $PROCURE_SEED, then 42].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Flat TOML file whose keys mirror the long flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads [default: all cores]. Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the CSV result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report zero seconds so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte-Carlo competitive ratios of the mechanisms.
    Bench(BenchArgs),
    /// Worst-case budget-smoothed ratio for a budget distribution.
    Smoothed(SmoothedArgs),
    /// Write a market CSV (plus companion budgets for adversarial markets).
    Gen {
        #[command(subcommand)]
        generator: GenCommand,
    },
    /// One mechanism on one market and budget, against the non-IC optimum.
    Ratio(RatioArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchPreset {
    Table1,
    Figure1,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub preset: Option<BenchPreset>,
    /// Comma-separated subset of cutoff, agn, greedy, rs_greedy [default: all].
    #[arg(long, value_delimiter = ',')]
    pub mechanism: Vec<String>,
    /// Fixed market CSV (`cost,utility`).
    #[arg(long, conflicts_with = "dist")]
    pub market: Option<PathBuf>,
    /// Cost distribution for fresh synthetic markets, e.g. `normal:20,5`.
    #[arg(long)]
    pub dist: Option<String>,
    /// Sellers per synthetic market.
    #[arg(long)]
    pub n: Option<usize>,
    /// Budget or comma-separated budgets.
    #[arg(long)]
    pub budget: Option<String>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub epsilon1: Option<f64>,
    #[arg(long)]
    pub delta1: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Sellers RS-Greedy buys up front.
    #[arg(long)]
    pub top_c: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SmoothedArgs {
    /// single, uniform-1-10, log-uniform-1-8, log-uniform-1-512, microworkers
    /// or two-budget-sweep.
    #[arg(long)]
    pub preset: Option<String>,
    /// Inline distribution `rho:prob,rho:prob,...`.
    #[arg(long, conflicts_with = "preset")]
    pub budgets: Option<String>,
    /// Distribution CSV with header `rho,prob`.
    #[arg(long, conflicts_with_all = ["preset", "budgets"])]
    pub dist_file: Option<PathBuf>,
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Linear pieces of the worst-case curve [default: number of budgets].
    #[arg(long)]
    pub segments: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Unit-utility sellers with i.i.d. costs.
    Synthetic {
        #[arg(long)]
        dist: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Buckets on which AGN is held to `1 − 1/e` at every companion budget.
    AgnHard {
        /// Budget ratios `B_i/B_1`, starting at 1.
        #[arg(long)]
        budgets: Option<String>,
        /// Sellers per unit bucket weight.
        #[arg(long)]
        n: Option<usize>,
        /// `B_1` [default: n].
        #[arg(long)]
        base_budget: Option<f64>,
    },
    /// Geometric groups on which Greedy stays near `(2+√2)/4`.
    LowerBound {
        #[arg(long)]
        m: Option<usize>,
        /// Sellers per group.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        w: Option<f64>,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct RatioArgs {
    #[arg(long)]
    pub mechanism: Option<String>,
    #[arg(long)]
    pub market: Option<PathBuf>,
    #[arg(long)]
    pub budget: Option<f64>,
    #[arg(long)]
    pub epsilon1: Option<f64>,
    #[arg(long)]
    pub delta1: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub top_c: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    /// Single property to run [default: all].
    #[arg(long)]
    pub property: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Largest random market size.
    #[arg(long)]
    pub n: Option<usize>,
}

/// Settings shared by every command after merging flags and config.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub record_timing: bool,
    pub config: Config,
}

impl Resolved {
    pub fn from_args(global: &GlobalArgs, env_seed: Option<&str>) -> Result<Self> {
        let config = match &global.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        let seed = resolve_seed(global.seed, &config, env_seed)?;
        let out = match &global.out {
            Some(p) => Some(p.clone()),
            None => config.path("out")?,
        };
        let no_timing = global.no_timing || config.bool("no-timing")?.unwrap_or(false);
        Ok(Resolved {
            seed,
            out,
            record_timing: !no_timing,
            config,
        })
    }

    fn header(&self, command: &str) -> String {
        format!("# seed={} command={command}", self.seed)
    }
}

/// Whether the command succeeded; `verify` reports failing properties here
/// rather than as an error.
pub type Status = bool;

/// Parse-free entry point: runs `cli` writing human output to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<Status> {
    let env_seed = std::env::var(SEED_ENV).ok();
    let ctx = Resolved::from_args(&cli.global, env_seed.as_deref())?;
    let threads = match cli.global.threads {
        Some(t) => Some(t),
        None => ctx.config.usize("threads")?,
    };
    if let Some(t) = threads {
        ensure!(t >= 1, "--threads must be >= 1");
        // A second initialisation in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match &cli.command {
        Command::Bench(a) => cmd_bench(a, &ctx, stdout),
        Command::Smoothed(a) => cmd_smoothed(a, &ctx, stdout),
        Command::Gen { generator } => cmd_gen(generator, &ctx, stdout),
        Command::Ratio(a) => cmd_ratio(a, &ctx, stdout),
        Command::Verify(a) => cmd_verify(a, &ctx, stdout),
    }
}

/// Write `body` (prefixed by the header line) to `--out`, or to `stdout`.
fn emit(ctx: &Resolved, header: &str, body: &str, stdout: &mut dyn Write) -> Result<()> {
    match &ctx.out {
        Some(path) => {
            write_file(path, &format!("{header}\n{body}"))?;
            writeln!(stdout, "{header}")?;
            writeln!(stdout, "wrote {}", path.display())?;
        }
        None => {
            writeln!(stdout, "{header}")?;
            write!(stdout, "{body}")?;
        }
    }
    Ok(())
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut w =
        BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    w.write_all(content.as_bytes())?;
    w.flush()?;
    Ok(())
}

pub fn read_market(path: &Path) -> Result<Market> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Market::read_csv(BufReader::new(file))
        .with_context(|| format!("reading market {}", path.display()))
}

/// Comma-separated positive numbers.
pub fn parse_list(raw: &str, what: &str) -> Result<Vec<f64>> {
    let values = raw
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("{what}: `{}` is not a number", s.trim()))
        })
        .collect::<Result<Vec<_>>>()?;
    ensure!(!values.is_empty(), "{what}: empty list");
    Ok(values)
}

/// Inline budget distribution `rho:prob,rho:prob`.
pub fn parse_budget_distribution(raw: &str) -> Result<BudgetDistribution> {
    let points = raw
        .split(',')
        .map(|item| {
            let (rho, prob) = item
                .split_once(':')
                .with_context(|| format!("`{item}`: expected rho:prob"))?;
            let rho = rho
                .trim()
                .parse::<f64>()
                .with_context(|| format!("bad rho in `{item}`"))?;
            let prob = prob
                .trim()
                .parse::<f64>()
                .with_context(|| format!("bad prob in `{item}`"))?;
            Ok((rho, prob))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BudgetDistribution::new(points)?)
}

fn parse_mechanisms(names: &[String]) -> Result<Vec<MechanismKind>> {
    if names.is_empty() {
        return Ok(MechanismKind::ALL.to_vec());
    }
    names
        .iter()
        .map(|n| n.parse::<MechanismKind>().map_err(Into::into))
        .collect()
}

fn rs_params(
    ctx: &Resolved,
    epsilon1: Option<f64>,
    delta1: Option<f64>,
    eta: Option<f64>,
    top_c: Option<usize>,
    seed: u64,
) -> Result<RsGreedyParams> {
    let c = &ctx.config;
    Ok(RsGreedyParams {
        epsilon1: epsilon1.or(c.f64("epsilon1")?).unwrap_or(0.0),
        delta1: delta1.or(c.f64("delta1")?).unwrap_or(0.0),
        eta: eta.or(c.f64("eta")?).unwrap_or(0.0),
        top_c: top_c.or(c.usize("top-c")?).unwrap_or(0),
        seed,
    })
}

pub fn cmd_bench(a: &BenchArgs, ctx: &Resolved, stdout: &mut dyn Write) -> Result<Status> {
    let c = &ctx.config;
    let preset = match (a.preset, c.string("preset")?) {
        (Some(p), _) => Some(p),
        (None, Some(s)) => Some(BenchPreset::from_str(&s, true).map_err(|e| anyhow::anyhow!(e))?),
        (None, None) => None,
    };
    let runs = a.runs.or(c.usize("runs")?);
    match preset {
        Some(BenchPreset::Table1) => {
            let runs = runs.unwrap_or(TABLE1_RUNS);
            let report = bench::run_table1(runs, ctx.seed, ctx.record_timing)?;
            let header = format!("{} preset=table1 runs={runs}", ctx.header("bench"));
            emit(ctx, &header, &report.to_csv_string(), stdout)?;
        }
        Some(BenchPreset::Figure1) => {
            let runs = runs.unwrap_or(FIGURE1_RUNS);
            let table = bench::run_figure1(runs, ctx.seed)?;
            let header = format!("{} preset=figure1 runs={runs}", ctx.header("bench"));
            emit(ctx, &header, &table.to_csv_string(), stdout)?;
        }
        None => {
            let mechanisms = if a.mechanism.is_empty() {
                match c.string("mechanism")? {
                    Some(s) => {
                        parse_mechanisms(&s.split(',').map(str::to_string).collect::<Vec<_>>())?
                    }
                    None => MechanismKind::ALL.to_vec(),
                }
            } else {
                parse_mechanisms(&a.mechanism)?
            };
            let raw_budget = match &a.budget {
                Some(b) => b.clone(),
                None => c
                    .string("budget")?
                    .context("one-shot bench needs --budget (or use --preset)")?,
            };
            let budgets = parse_list(&raw_budget, "--budget")?;
            let market = a.market.clone().or(c.path("market")?);
            let dist = a.dist.clone().or(c.string("dist")?);
            let (instance, fixed) = match (market, dist) {
                (Some(path), _) => {
                    let label = path
                        .file_stem()
                        .map_or("market".into(), |s| s.to_string_lossy().into_owned());
                    (
                        InstanceSpec::Fixed {
                            label,
                            market: read_market(&path)?,
                        },
                        true,
                    )
                }
                (None, Some(d)) => {
                    let n = a.n.or(c.usize("n")?).context("--dist needs --n")?;
                    (
                        InstanceSpec::Synthetic {
                            dist: d.parse::<CostDistribution>()?,
                            n,
                        },
                        false,
                    )
                }
                (None, None) => bail!("one-shot bench needs --market or --dist (or use --preset)"),
            };
            let runs = runs.unwrap_or(if fixed { 1 } else { TABLE1_RUNS });
            let spec = ExperimentSpec {
                mechanisms,
                instance,
                budgets,
                runs,
                seed: ctx.seed,
                rs_params: rs_params(ctx, a.epsilon1, a.delta1, a.eta, a.top_c, 0)?,
                record_timing: ctx.record_timing,
            };
            let report = bench::run_experiment(&spec)?;
            let header = format!("{} runs={runs}", ctx.header("bench"));
            if ctx.out.is_none() && report.rows.len() == 1 && fixed && runs == 1 {
                writeln!(stdout, "{header}")?;
                writeln!(stdout, "{:.6}", report.rows[0].mean_ratio)?;
            } else {
                emit(ctx, &header, &report.to_csv_string(), stdout)?;
            }
        }
    }
    Ok(true)
}

const SMOOTHED_HEADER: &str = "item,k,rho,prob,cutoff,f,g,ratio,breakpoint,slope";

/// One CSV table holding the total, the per-budget breakdown and the curve.
pub fn smoothed_csv(r: &SmoothedResult) -> String {
    let mut s = format!("{SMOOTHED_HEADER}\n");
    s += &format!("total,,,,,,,{:.6},,\n", r.ratio);
    for (k, e) in r.per_budget.iter().enumerate() {
        s += &format!(
            "budget,{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},,\n",
            k + 1,
            e.rho,
            e.prob,
            e.cutoff,
            e.f,
            e.g,
            e.ratio
        );
    }
    for (k, (f, a)) in r
        .curve
        .breakpoints()
        .iter()
        .zip(r.curve.slopes())
        .enumerate()
    {
        s += &format!("piece,{},,,,,,,{f:.9},{a:.9e}\n", k + 1);
    }
    s
}

pub fn cmd_smoothed(a: &SmoothedArgs, ctx: &Resolved, stdout: &mut dyn Write) -> Result<Status> {
    let c = &ctx.config;
    let opts = OptimizeOptions {
        restarts: a
            .restarts
            .or(c.usize("restarts")?)
            .unwrap_or(OptimizeOptions::default().restarts),
        seed: ctx.seed,
        segments: a.segments.or(c.usize("segments")?),
        ..Default::default()
    };
    ensure!(opts.restarts >= 1, "--restarts must be >= 1");
    let preset = a.preset.clone().or(c.string("preset")?);
    let header = format!("{} restarts={}", ctx.header("smoothed"), opts.restarts);

    if preset.as_deref() == Some("two-budget-sweep") {
        let rhos: Vec<f64> = (1..=SWEEP_POINTS).map(|k| k as f64 / 100.0).collect();
        let sweep = smoothed::two_budget_sweep(&rhos, &opts)?;
        let mut body = String::from("rho,ratio\n");
        for p in &sweep {
            body += &format!("{:.2},{:.6}\n", p.rho, p.result.ratio);
        }
        emit(
            ctx,
            &format!("{header} preset=two-budget-sweep"),
            &body,
            stdout,
        )?;
        return Ok(true);
    }

    let (dist, label) = if let Some(name) = preset {
        (BudgetDistribution::preset(&name)?, format!("preset={name}"))
    } else if let Some(inline) = a.budgets.clone().or(c.string("budgets")?) {
        (parse_budget_distribution(&inline)?, "inline".to_string())
    } else if let Some(path) = a.dist_file.clone().or(c.path("dist-file")?) {
        let file = File::open(&path).with_context(|| format!("opening {}", path.display()))?;
        (
            BudgetDistribution::read_csv(BufReader::new(file))?,
            format!("file={}", path.display()),
        )
    } else {
        bail!("smoothed needs --preset, --budgets or --dist-file");
    };
    let result = smoothed::optimize_worst_curve_with(&dist, &opts)?;
    let header = format!("{header} {label}");
    match &ctx.out {
        Some(_) => {
            emit(ctx, &header, &smoothed_csv(&result), stdout)?;
            writeln!(stdout, "ratio {:.6}", result.ratio)?;
        }
        None => emit(ctx, &header, &smoothed_csv(&result), stdout)?,
    }
    Ok(true)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map_or("market".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.budgets.csv"))
}

fn emit_market(
    ctx: &Resolved,
    header: &str,
    market: &Market,
    budgets: &[(&str, Vec<f64>)],
    stdout: &mut dyn Write,
) -> Result<()> {
    let mut body = Vec::new();
    market.write_csv(&mut body)?;
    let body = String::from_utf8(body)?;
    match &ctx.out {
        Some(path) => {
            write_file(path, &format!("{header}\n{body}"))?;
            writeln!(stdout, "{header}")?;
            writeln!(
                stdout,
                "wrote {} ({} sellers)",
                path.display(),
                market.len()
            )?;
            if !budgets.is_empty() {
                let side = sidecar_path(path);
                let mut s = format!("{header}\nkind,k,budget\n");
                for (kind, values) in budgets {
                    for (k, b) in values.iter().enumerate() {
                        s += &format!("{kind},{},{b}\n", k + 1);
                    }
                }
                write_file(&side, &s)?;
                writeln!(stdout, "wrote {}", side.display())?;
            }
        }
        None => {
            writeln!(stdout, "{header}")?;
            for (kind, values) in budgets {
                let list: Vec<String> = values.iter().map(|b| b.to_string()).collect();
                writeln!(stdout, "# {kind}={}", list.join(","))?;
            }
            write!(stdout, "{body}")?;
        }
    }
    Ok(())
}

pub fn cmd_gen(g: &GenCommand, ctx: &Resolved, stdout: &mut dyn Write) -> Result<Status> {
    let c = &ctx.config;
    match g {
        GenCommand::Synthetic { dist, n } => {
            let dist = dist
                .clone()
                .or(c.string("dist")?)
                .context("gen synthetic needs --dist")?;
            let dist: CostDistribution = dist.parse()?;
            let n = n.or(c.usize("n")?).context("gen synthetic needs --n")?;
            let market = gen_synthetic(n, &dist, ctx.seed)?;
            let header = format!(
                "{} generator=synthetic dist={dist} n={n}",
                ctx.header("gen")
            );
            emit_market(ctx, &header, &market, &[], stdout)?;
        }
        GenCommand::AgnHard {
            budgets,
            n,
            base_budget,
        } => {
            let raw = budgets
                .clone()
                .or(c.string("budgets")?)
                .unwrap_or_else(|| "1,2.5,6.25".into());
            let ratios = parse_list(&raw, "--budgets")?;
            let n = n.or(c.usize("n")?).unwrap_or(10_000);
            let base = base_budget.or(c.f64("base-budget")?).unwrap_or(n as f64);
            let h = gen_agn_hard(base, &ratios, n)?;
            let header = format!(
                "{} generator=agn-hard budgets={raw} n={n} base-budget={base}",
                ctx.header("gen")
            );
            emit_market(
                ctx,
                &header,
                &h.market,
                &[("budget", h.budgets.clone())],
                stdout,
            )?;
        }
        GenCommand::LowerBound { m, n, q, w } => {
            let m = m.or(c.usize("m")?).unwrap_or(8);
            let n = n.or(c.usize("n")?).unwrap_or(10_000);
            let std = GeometricMarketSpec::standard(m, n)?;
            let spec = GeometricMarketSpec::new(
                q.or(c.f64("q")?).unwrap_or(std.q),
                w.or(c.f64("w")?).unwrap_or(std.w),
                m,
                n,
            )?;
            let lb = gen_lower_bound_market(&spec)?;
            let header = format!(
                "{} generator=lower-bound m={m} n={n} q={} w={}",
                ctx.header("gen"),
                spec.q,
                spec.w
            );
            emit_market(
                ctx,
                &header,
                &lb.market,
                &[
                    ("budget", lb.budgets.clone()),
                    ("greedy", lb.greedy_budgets.clone()),
                ],
                stdout,
            )?;
        }
    }
    Ok(true)
}

pub fn cmd_ratio(a: &RatioArgs, ctx: &Resolved, stdout: &mut dyn Write) -> Result<Status> {
    let c = &ctx.config;
    let kind: MechanismKind = a
        .mechanism
        .clone()
        .or(c.string("mechanism")?)
        .unwrap_or_else(|| "greedy".into())
        .parse()?;
    let path = a
        .market
        .clone()
        .or(c.path("market")?)
        .context("ratio needs --market")?;
    let budget = a
        .budget
        .or(c.f64("budget")?)
        .context("ratio needs --budget")?;
    let market = read_market(&path)?;
    let seed = procure::rng::split_seed(ctx.seed, "rs_greedy", 0);
    let params = rs_params(ctx, a.epsilon1, a.delta1, a.eta, a.top_c, seed)?;
    let outcome = kind.run(&market, budget, &params)?;
    let opt = non_ic_optimum(&market, budget);
    let ratio = competitive_ratio(&outcome, &market, budget);
    let body = format!(
        "mechanism,budget,utility,payment,optimum,ratio\n{},{budget},{:.6},{:.6},{:.6},{:.6}\n",
        kind.name(),
        outcome.total_utility,
        outcome.total_payment,
        opt.utility,
        ratio
    );
    emit(ctx, &ctx.header("ratio"), &body, stdout)?;
    Ok(true)
}

pub fn cmd_verify(a: &VerifyArgs, ctx: &Resolved, stdout: &mut dyn Write) -> Result<Status> {
    let c = &ctx.config;
    let opts = VerifyOptions {
        seed: ctx.seed,
        samples: a.samples.or(c.usize("samples")?),
        max_sellers: a.n.or(c.usize("n")?),
    };
    let reports = match a.property.clone().or(c.string("property")?) {
        Some(name) => vec![verify::run_property(name.parse::<Property>()?, &opts)?],
        None => verify::run_all(&opts)?,
    };
    writeln!(stdout, "{}", ctx.header("verify"))?;
    for r in &reports {
        writeln!(stdout, "{r}")?;
    }
    let passed = reports.iter().all(|r| r.passed);
    if let Some(path) = &ctx.out {
        let mut s = format!(
            "{}\nproperty,passed,checks,worst,tolerance\n",
            ctx.header("verify")
        );
        for r in &reports {
            s += &format!(
                "{},{},{},{:e},{:e}\n",
                r.property, r.passed, r.checks, r.worst, r.tolerance
            );
        }
        write_file(path, &s)?;
    }
    Ok(passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_parsing() {
        assert_eq!(
            parse_list("1, 2.5,6.25", "x").unwrap(),
            vec![1.0, 2.5, 6.25]
        );
        assert!(parse_list("1,,2", "x").is_err());
        assert!(parse_list("a", "x").is_err());
    }

    #[test]
    fn inline_distribution() {
        let d = parse_budget_distribution("0.5:1, 1:1").unwrap();
        assert_eq!(d.points(), &[(0.5, 0.5), (1.0, 0.5)]);
        assert!(parse_budget_distribution("0.5").is_err());
        assert!(parse_budget_distribution("0.5:x").is_err());
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(
            sidecar_path(Path::new("out/m.csv")),
            PathBuf::from("out/m.budgets.csv")
        );
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
