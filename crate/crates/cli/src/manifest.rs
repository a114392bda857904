//! Run manifests: what was run, with which seed, and digests of what it
//! wrote.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use allometry_core::SeedSpec;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::io::write_json;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Effective configuration after config-file and flag merging.
    pub config: serde_json::Value,
    pub config_digest: String,
    pub seed: SeedSpec,
    pub outputs: Vec<OutputRecord>,
    pub tool_version: String,
    /// Unix seconds.
    pub started: u64,
    pub finished: u64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

pub fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// Manifest path for a primary output: `<out>.manifest.json`.
pub fn manifest_path(primary: &Path) -> PathBuf {
    let mut s = primary.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

impl RunManifest {
    pub fn new<C: Serialize>(command: &str, config: &C, seed: u64, started: u64) -> Result<Self> {
        let config = serde_json::to_value(config)
            .map_err(|e| CliError::BadInput(format!("cannot serialize config: {e}")))?;
        // serde_json maps are key-sorted, so this encoding is canonical.
        let canonical = serde_json::to_vec(&config).expect("JSON value serializes");
        Ok(Self {
            command: command.to_string(),
            config_digest: sha256_hex(&canonical),
            config,
            seed: SeedSpec::new(seed, 0),
            outputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started,
            finished: started,
        })
    }

    pub fn record_output(&mut self, path: &Path) -> Result<()> {
        let sha256 = file_digest(path)?;
        self.outputs.push(OutputRecord {
            path: path.to_path_buf(),
            sha256,
        });
        Ok(())
    }

    /// Stamps the finish time and writes the manifest next to `primary`.
    pub fn finish(mut self, primary: &Path) -> Result<PathBuf> {
        self.finished = unix_now().max(self.started);
        let path = manifest_path(primary);
        write_json(&path, &self)?;
        Ok(path)
    }

    /// Recomputes every output digest and reports the first mismatch.
    /// Relative output paths are resolved against `base`, the directory the
    /// run was started from.
    pub fn verify_outputs(&self, base: &Path) -> Result<()> {
        for out in &self.outputs {
            let now = file_digest(&base.join(&out.path))?;
            if now != out.sha256 {
                return Err(CliError::BadInput(format!(
                    "{}: digest {} does not match manifest {}",
                    out.path.display(),
                    now,
                    out.sha256
                )));
            }
        }
        Ok(())
    }
}
