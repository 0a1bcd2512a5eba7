//! Flat `key=value` configuration files. Command-line flags win over file
//! values, which win over defaults.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

#[derive(Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
    source: String,
}

impl Settings {
    /// Reads `path` if given. Keys outside `allowed` (plus `seed`) are
    /// rejected, as are duplicates.
    pub fn load(path: Option<&Path>, allowed: &[&str]) -> Result<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let source = path.display().to_string();
        let text = fs::read_to_string(path).with_context(|| format!("reading config {source}"))?;
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("{source}:{}: expected key=value", i + 1);
            };
            let (k, v) = (k.trim(), v.trim());
            if k != "seed" && !allowed.contains(&k) {
                bail!("{source}:{}: unknown key {k:?} (allowed: seed, {})", i + 1, allowed.join(", "));
            }
            if values.insert(k.to_string(), v.to_string()).is_some() {
                bail!("{source}:{}: duplicate key {k:?}", i + 1);
            }
        }
        Ok(Self { values, source })
    }

    pub fn get<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(raw) => raw.parse().map_err(|e| anyhow!("{}: key {key}: {e}", self.source)),
            None => Ok(default),
        }
    }

    /// Comma-separated list.
    pub fn get_list<T>(&self, flag: Option<Vec<T>>, key: &str, default: Vec<T>) -> Result<Vec<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(raw) => raw
                .split(',')
                .map(|t| t.trim().parse().map_err(|e| anyhow!("{}: key {key}: {e}", self.source)))
                .collect(),
            None => Ok(default),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(text: &str) -> tempfile::NamedTempFile {
        let f = tempfile::NamedTempFile::new().unwrap();
        fs::write(f.path(), text).unwrap();
        f
    }

    #[test]
    fn flag_beats_file_beats_default() {
        let f = write("# fit\nsteps = 40\nlr=0.5\n");
        let s = Settings::load(Some(f.path()), &["steps", "lr"]).unwrap();
        assert_eq!(s.get(None, "steps", 500usize).unwrap(), 40);
        assert_eq!(s.get(Some(7usize), "steps", 500).unwrap(), 7);
        assert_eq!(s.get(None, "lr", 0.1f64).unwrap(), 0.5);
        assert_eq!(Settings::default().get(None, "lr", 0.1f64).unwrap(), 0.1);
    }

    #[test]
    fn rejects_unknown_duplicate_and_malformed() {
        assert!(Settings::load(Some(write("step=1").path()), &["steps"]).is_err());
        assert!(Settings::load(Some(write("steps=1\nsteps=2").path()), &["steps"]).is_err());
        assert!(Settings::load(Some(write("steps").path()), &["steps"]).is_err());
        let s = Settings::load(Some(write("steps=x").path()), &["steps"]).unwrap();
        assert!(s.get(None, "steps", 1usize).is_err());
    }

    #[test]
    fn lists() {
        let s = Settings::load(Some(write("ks=300, 1000,2000").path()), &["ks"]).unwrap();
        assert_eq!(s.get_list(None, "ks", vec![1usize]).unwrap(), vec![300, 1000, 2000]);
    }
}
