//! Flat key/value run configuration.
//!
//! Keys mirror the long flag names (`seed`, `threads`, `runs`, `restarts`,
//! ...). Values from the command line always win over the file.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use toml::{Table, Value};

/// Seed used when neither a flag, the config file nor `PROCURE_SEED` sets one.
pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "PROCURE_SEED";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    table: Table,
}

impl Config {
    /// Parse flat TOML. Nested tables are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let table: Table = text.parse().context("malformed config file")?;
        for (key, value) in &table {
            if matches!(value, Value::Table(_)) {
                bail!("config key `{key}`: nested tables are not supported");
            }
        }
        Ok(Config { table })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Config::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.table.keys().map(String::as_str)
    }

    fn lookup(&self, key: &str) -> Option<&Value> {
        self.table
            .get(key)
            .or_else(|| self.table.get(&key.replace('-', "_")))
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>> {
        match self.lookup(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
            Some(v) => bail!("config key `{key}`: expected a non-negative integer, got {v}"),
        }
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.u64(key)?
            .map(|v| usize::try_from(v).with_context(|| format!("config key `{key}` is too large")))
            .transpose()
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.lookup(key) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(*x)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(v) => bail!("config key `{key}`: expected a number, got {v}"),
        }
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>> {
        match self.lookup(key) {
            None => Ok(None),
            Some(Value::Boolean(b)) => Ok(Some(*b)),
            Some(v) => bail!("config key `{key}`: expected true or false, got {v}"),
        }
    }

    /// Strings, and numbers or arrays rendered as comma lists, so that
    /// `budget = 100`, `budget = "100,200"` and `budget = [100, 200]` all work.
    pub fn string(&self, key: &str) -> Result<Option<String>> {
        match self.lookup(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(Value::Integer(i)) => Ok(Some(i.to_string())),
            Some(Value::Float(x)) => Ok(Some(x.to_string())),
            Some(Value::Array(items)) => {
                let parts = items
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => Ok(s.clone()),
                        Value::Integer(i) => Ok(i.to_string()),
                        Value::Float(x) => Ok(x.to_string()),
                        other => bail!("config key `{key}`: unsupported list item {other}"),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Some(parts.join(",")))
            }
            Some(v) => bail!("config key `{key}`: expected a string, got {v}"),
        }
    }

    pub fn path(&self, key: &str) -> Result<Option<PathBuf>> {
        Ok(self.string(key)?.map(PathBuf::from))
    }
}

/// Seed precedence: flag, then config file, then `PROCURE_SEED`, then 42.
pub fn resolve_seed(flag: Option<u64>, config: &Config, env: Option<&str>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Some(s) = config.u64("seed")? {
        return Ok(s);
    }
    match env {
        Some(raw) if !raw.trim().is_empty() => raw
            .trim()
            .parse()
            .with_context(|| format!("{SEED_ENV}=`{raw}` is not a valid seed")),
        _ => Ok(DEFAULT_SEED),
    }
}
