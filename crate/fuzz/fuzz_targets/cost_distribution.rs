#![no_main]

use libfuzzer_sys::fuzz_target;
use procure::instances::CostDistribution;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(dist) = s.parse::<CostDistribution>() {
        let _ = dist.label();
        let again: CostDistribution = dist.to_string().parse().expect("display round-trips");
        assert_eq!(again.to_string(), dist.to_string());
        let _ = dist.sampler();
    }
});
