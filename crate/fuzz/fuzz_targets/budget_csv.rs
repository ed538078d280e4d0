#![no_main]

use libfuzzer_sys::fuzz_target;
use procure::smoothed::BudgetDistribution;

fuzz_target!(|data: &[u8]| {
    if let Ok(dist) = BudgetDistribution::read_csv(data) {
        let total: f64 = dist.points().iter().map(|p| p.1).sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert_eq!(dist.points().last().map(|p| p.0), Some(1.0));
    }
});
