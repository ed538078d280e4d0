//! Replays the checked-in fuzz seeds through the parsers with the same
//! assertions the fuzz targets make.

use std::fs;
use std::path::PathBuf;

use procure::instances::CostDistribution;
use procure::smoothed::BudgetDistribution;
use procure::Market;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn market_seeds() {
    let mut parsed = 0;
    for (_, data) in seeds("market_csv") {
        if let Ok(m) = Market::read_csv(data.as_slice()) {
            let mut buf = Vec::new();
            m.write_csv(&mut buf).unwrap();
            assert_eq!(Market::read_csv(buf.as_slice()).unwrap(), m);
            parsed += 1;
        }
    }
    assert_eq!(parsed, 2);
}

#[test]
fn budget_seeds() {
    for (name, data) in seeds("budget_csv") {
        let r = BudgetDistribution::read_csv(data.as_slice());
        assert_eq!(r.is_ok(), name != "duplicate.csv", "{name}");
        if let Ok(d) = r {
            let total: f64 = d.points().iter().map(|p| p.1).sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn cost_distribution_seeds() {
    for (name, data) in seeds("cost_distribution") {
        let s = String::from_utf8(data).unwrap();
        let d: CostDistribution = s.parse().unwrap_or_else(|e| panic!("{name}: {e}"));
        let again: CostDistribution = d.to_string().parse().unwrap();
        assert_eq!(again.to_string(), d.to_string(), "{name}");
        assert!(d.sampler().is_ok());
    }
}
