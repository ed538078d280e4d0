#![no_main]

use libfuzzer_sys::fuzz_target;
use procure::Market;

fuzz_target!(|data: &[u8]| {
    if let Ok(market) = Market::read_csv(data) {
        let mut buf = Vec::new();
        market.write_csv(&mut buf).unwrap();
        let back = Market::read_csv(buf.as_slice()).expect("written market parses");
        assert_eq!(back.len(), market.len());
        for (a, b) in back.sellers().iter().zip(market.sellers()) {
            assert_eq!(a.cost.to_bits(), b.cost.to_bits());
            assert_eq!(a.utility.to_bits(), b.utility.to_bits());
        }
    }
});
