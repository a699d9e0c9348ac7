//! Run manifests: enough to repeat a run exactly.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const TOOL: &str = "screenml";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    /// Arguments after the program name, as given.
    pub command_line: Vec<String>,
    /// Directory relative paths in `command_line` resolve against.
    pub working_directory: String,
    /// Fully resolved settings (defaults, config file and flags merged).
    pub config: Value,
    /// `sha256:<hex>` of the input file, when there is one.
    pub input_digest: Option<String>,
    pub master_seed: Option<u64>,
    pub outputs: Vec<String>,
    pub timestamp_unix: u64,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str, command_line: &[String], config: Value) -> Self {
        Self {
            tool: TOOL.into(),
            tool_version: TOOL_VERSION.into(),
            command: command.into(),
            command_line: command_line.to_vec(),
            working_directory: std::env::current_dir()
                .map(|d| d.display().to_string())
                .unwrap_or_default(),
            config,
            input_digest: None,
            master_seed: None,
            outputs: Vec::new(),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            wall_clock_seconds: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serialization");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            origin: path.display().to_string(),
            source,
        })
    }
}

/// `sha256:<hex>` of a file's bytes.
pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(bytes_digest(&bytes))
}

pub fn bytes_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// `<file>.manifest.json` next to a single-file output.
pub fn sibling_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            bytes_digest(b""),
            "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn sibling_names() {
        assert_eq!(
            sibling_path(Path::new("out/model.json")),
            PathBuf::from("out/model.json.manifest.json")
        );
    }
}
