#![no_main]

use libfuzzer_sys::fuzz_target;
use procure_cli::{resolve_seed, Config};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = Config::parse(text) {
        let keys: Vec<String> = cfg.keys().map(str::to_string).collect();
        for key in &keys {
            let _ = cfg.u64(key);
            let _ = cfg.f64(key);
            let _ = cfg.bool(key);
            let _ = cfg.string(key);
        }
        let _ = resolve_seed(None, &cfg, None);
    }
});
