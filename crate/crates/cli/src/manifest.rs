//! Per-run output manifest: every file a run writes is recorded with its
//! SHA-256 digest, alongside the effective configuration and timing.

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::commands::CliError;

#[derive(Debug, Serialize)]
pub struct FileDigest {
    /// Path relative to the output root, with `/` separators.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub artifact_version: String,
    pub command: String,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub wall_clock_seconds: f64,
    pub files: Vec<FileDigest>,
}

/// Routes all file output through one place so the manifest digests always
/// match what was written.
pub struct OutputWriter {
    root: PathBuf,
    files: Vec<FileDigest>,
    started: Instant,
    quiet: bool,
}

impl OutputWriter {
    pub fn new(root: PathBuf, quiet: bool) -> Result<Self, CliError> {
        std::fs::create_dir_all(&root).map_err(CliError::Io)?;
        Ok(OutputWriter {
            root,
            files: Vec::new(),
            started: Instant::now(),
            quiet,
        })
    }

    /// Writes `bytes` under the output root and records its digest.
    pub fn write_bytes(&mut self, relative: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.root.join(relative);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(CliError::Io)?;
        }
        std::fs::write(&path, bytes).map_err(CliError::Io)?;
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        let digest = hasher.finalize();
        let sha256 = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.files.push(FileDigest {
            path: relative.replace('\\', "/"),
            bytes: bytes.len() as u64,
            sha256,
        });
        if !self.quiet {
            eprintln!("wrote {}", path.display());
        }
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, relative: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(CliError::Json)?;
        text.push('\n');
        self.write_bytes(relative, text.as_bytes())
    }

    /// Writes `manifest.json` at the output root, listing every file this
    /// writer produced.
    pub fn finish(
        mut self,
        command: &str,
        config: serde_json::Value,
        seed: Option<u64>,
    ) -> Result<(), CliError> {
        self.files.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = RunManifest {
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            seed,
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
            files: self.files,
        };
        let mut text = serde_json::to_string_pretty(&manifest).map_err(CliError::Json)?;
        text.push('\n');
        let path = self.root.join("manifest.json");
        std::fs::write(&path, text).map_err(CliError::Io)?;
        if !self.quiet {
            eprintln!("wrote {}", path.display());
        }
        Ok(())
    }
}
