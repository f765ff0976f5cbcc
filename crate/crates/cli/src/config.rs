//! `key = value` configuration files.
//!
//! Keys are the long flag names without dashes (`budget-seconds = 60`). A key may repeat
//! (`bound = n=0..10`); `#` starts a comment. Flags given on the command line win.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::Failure;

pub const CONFIG_DIR_ENV: &str = "POLYFACT_CONFIG_DIR";
pub const DEFAULT_FILE: &str = "polyfact.conf";

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, Vec<String>>,
    source: Option<PathBuf>,
}

impl Config {
    pub fn parse(text: &str, source: Option<PathBuf>) -> Result<Self, Failure> {
        let mut values: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Failure::usage(format!("config line {}: expected key = value, got `{raw}`", i + 1))
            })?;
            values.entry(k.trim().to_string()).or_default().push(v.trim().to_string());
        }
        Ok(Config { values, source })
    }

    /// The explicit file, or `$POLYFACT_CONFIG_DIR/polyfact.conf` when it exists.
    pub fn load(explicit: Option<&Path>) -> Result<Self, Failure> {
        let path = match explicit {
            Some(p) => p.to_path_buf(),
            None => match std::env::var_os(CONFIG_DIR_ENV) {
                Some(dir) => {
                    let p = Path::new(&dir).join(DEFAULT_FILE);
                    if !p.exists() {
                        return Ok(Config::default());
                    }
                    p
                }
                None => return Ok(Config::default()),
            },
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
        Config::parse(&text, Some(path))
    }

    pub fn all(&self, key: &str) -> &[String] {
        self.values.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn string(&self, key: &str) -> Option<String> {
        self.all(key).last().cloned()
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, Failure>
    where
        T::Err: std::fmt::Display,
    {
        match self.string(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|e| {
                let from = self.source.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
                Failure::usage(format!("config {from}: bad value for `{key}`: {e}"))
            }),
        }
    }

    pub fn flag(&self, key: &str) -> Result<bool, Failure> {
        Ok(self.get::<bool>(key)?.unwrap_or(false))
    }

    /// Command-line value if present, else the config value.
    pub fn or<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, Failure>
    where
        T::Err: std::fmt::Display,
    {
        match cli {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_repeated_keys_and_comments() {
        let c = Config::parse("# run\npreset = brocard\nbound = n=0..10\nbound=m=1..2 # trailing\nworkers=4\n", None).unwrap();
        assert_eq!(c.string("preset").as_deref(), Some("brocard"));
        assert_eq!(c.all("bound"), ["n=0..10", "m=1..2"]);
        assert_eq!(c.get::<usize>("workers").unwrap(), Some(4));
        assert_eq!(c.or(Some(2usize), "workers").unwrap(), Some(2));
        assert!(c.get::<usize>("preset").is_err());
        assert!(Config::parse("nonsense", None).is_err());
    }
}
