//! Output files and the run manifest.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::config::RunFile;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const MANIFEST_SCHEMA: u32 = 1;

/// Record of one run. Passing it back as `--config` reproduces the run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: u32,
    pub command: String,
    /// Hash embedded in every CSV of the run.
    pub config_hash: String,
    pub seed: u64,
    pub versions: Versions,
    /// Fully resolved configuration, overrides included.
    pub config: RunFile,
    /// File names relative to the manifest's directory.
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Versions {
    pub milac: String,
    pub milac_cli: String,
}

impl Versions {
    pub fn current() -> Self {
        Versions { milac: milac::VERSION.to_string(), milac_cli: env!("CARGO_PKG_VERSION").to_string() }
    }
}

/// First line of every CSV written by the CLI.
pub fn provenance_line(config_hash: &str, seed: u64) -> String {
    format!("# config_hash={config_hash} seed={seed}\n")
}

pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root).with_context(|| format!("cannot create output directory {}", root.display()))?;
        Ok(OutputDir { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.root.join(name);
        std::fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        self.written.push(name.to_string());
        Ok(path)
    }

    pub fn finish(mut self, command: &str, config_hash: String, run: &RunFile) -> Result<PathBuf> {
        let manifest = Manifest {
            schema: MANIFEST_SCHEMA,
            command: command.to_string(),
            config_hash,
            seed: run.seed,
            versions: Versions::current(),
            config: run.clone(),
            outputs: std::mem::take(&mut self.written),
        };
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        self.write(MANIFEST_FILE, &(json + "\n"))
    }
}
