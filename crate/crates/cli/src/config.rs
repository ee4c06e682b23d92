use anyhow::{Context, Result};
use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

/// Resolved run configuration. Values come from, in order of priority:
/// command-line flags, `SIREN_<KEY>` environment variables, the flat
/// key=value file named by `--config`/`SIREN_CONFIG`, then defaults.
/// Every resolved value is echoed so a run can be reproduced from its
/// output alone.
pub struct RunConfig {
    file: BTreeMap<String, String>,
    effective: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn load(config_flag: Option<&Path>) -> Result<RunConfig> {
        let path = config_flag
            .map(|p| p.to_path_buf())
            .or_else(|| std::env::var_os("SIREN_CONFIG").map(Into::into));
        let mut file = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("cannot read config file {}", path.display()))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').with_context(|| {
                    format!("config line {}: expected key=value", lineno + 1)
                })?;
                file.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(RunConfig { file, effective: BTreeMap::new() })
    }

    /// Flag > SIREN_<KEY> env var > config file > default.
    pub fn resolve<T>(&mut self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let parse = |raw: &str, origin: &str| -> Result<T> {
            raw.parse().map_err(|e| {
                anyhow::anyhow!("bad value {raw:?} for {key} (from {origin}): {e}")
            })
        };
        let value = if let Some(v) = flag {
            v
        } else if let Ok(raw) = std::env::var(format!("SIREN_{}", key.to_uppercase())) {
            parse(&raw, "environment")?
        } else if let Some(raw) = self.file.get(key) {
            parse(&raw.clone(), "config file")?
        } else {
            default
        };
        self.effective.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    pub fn resolve_opt<T>(&mut self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let value = if let Some(v) = flag {
            Some(v)
        } else if let Ok(raw) = std::env::var(format!("SIREN_{}", key.to_uppercase())) {
            Some(raw.parse().map_err(|e| {
                anyhow::anyhow!("bad value {raw:?} for {key} (from environment): {e}")
            })?)
        } else if let Some(raw) = self.file.get(key).cloned() {
            Some(raw.parse().map_err(|e| {
                anyhow::anyhow!("bad value {raw:?} for {key} (from config file): {e}")
            })?)
        } else {
            None
        };
        if let Some(v) = &value {
            self.effective.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    pub fn note(&mut self, key: &str, value: impl Display) {
        self.effective.insert(key.to_string(), value.to_string());
    }

    /// One `config <key>=<value>` line per resolved setting, on stderr
    /// so it never pollutes machine-readable stdout.
    pub fn echo(&self) {
        for (key, value) in &self.effective {
            eprintln!("config {key}={value}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn precedence_flag_env_file_default() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# comment\nalpha = 3\nbeta=4").unwrap();
        let mut config = RunConfig::load(Some(f.path())).unwrap();
        // flag wins over file
        assert_eq!(config.resolve(Some(9u64), "alpha", 0).unwrap(), 9);
        // file wins over default
        assert_eq!(config.resolve(None::<u64>, "beta", 0).unwrap(), 4);
        // default when nothing set
        assert_eq!(config.resolve(None::<u64>, "gamma", 7).unwrap(), 7);
    }

    #[test]
    fn env_wins_over_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "zetavalue=1").unwrap();
        let mut config = RunConfig::load(Some(f.path())).unwrap();
        std::env::set_var("SIREN_ZETAVALUE", "2");
        let got = config.resolve(None::<u64>, "zetavalue", 0).unwrap();
        std::env::remove_var("SIREN_ZETAVALUE");
        assert_eq!(got, 2);
    }

    #[test]
    fn malformed_file_is_an_error() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "this has no separator").unwrap();
        assert!(RunConfig::load(Some(f.path())).is_err());
    }
}
