use std::fs;
use std::path::PathBuf;

use procure_cli::{resolve_seed, Config};

#[test]
fn config_fuzz_seeds() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus/config");
    let mut names = Vec::new();
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let parsed = Config::parse(&fs::read_to_string(&path).unwrap());
        assert_eq!(parsed.is_ok(), name != "nested.toml", "{name}");
        if let Ok(cfg) = parsed {
            for key in cfg.keys() {
                let _ = (cfg.u64(key), cfg.f64(key), cfg.bool(key), cfg.string(key));
            }
            resolve_seed(None, &cfg, None).unwrap();
        }
        names.push(name);
    }
    assert_eq!(names.len(), 3);
}
