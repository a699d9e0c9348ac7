//! Optional `key = value` config files mirroring the CLI flags.
//!
//! Keys are flag names without the leading dashes (`test-fraction`, or
//! `test_fraction`); `#` starts a comment line. Flags given on the command
//! line win over the file.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    origin: String,
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    origin: origin.into(),
                    line: i + 1,
                    message: "expected `key = value`".into(),
                });
            };
            let key = key.trim().replace('_', "-");
            let value = value.trim().trim_matches('"').to_string();
            values.insert(key, value);
        }
        Ok(Self {
            origin: origin.into(),
            values,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Fails on any key not in `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.values.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::Usage(format!(
                "{}: unknown config key `{k}`",
                self.origin
            ))),
            None => Ok(()),
        }
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get_str(key)
            .map(|v| {
                v.parse().map_err(|_| {
                    Error::Usage(format!("{}: invalid value `{v}` for `{key}`", self.origin))
                })
            })
            .transpose()
    }
}
