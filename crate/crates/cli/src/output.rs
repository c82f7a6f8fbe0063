use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use snlcm_core::experiments::ExperimentReport;

use crate::commands::Command;

/// Bumped whenever a CSV header changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_seconds: f64,
    pub workers: usize,
}

/// Run manifest written next to each CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub experiment: String,
    /// The full command; `replay` reruns it.
    pub config: Command,
    pub seed: Option<u64>,
    pub xi: Option<f64>,
    pub mode: Option<String>,
    pub code_version: String,
    pub params: Value,
    pub summary: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
    pub timing: Timing,
    pub csv_file: String,
    pub csv_header_hash: String,
}

pub fn header_hash(header: &str) -> String {
    Sha256::digest(header.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Write `<stem>.csv` and `<stem>.manifest.json` into `dir`; returns both
/// paths.
pub fn write_run(
    dir: &Path,
    stem: &str,
    command: &Command,
    report: &ExperimentReport,
    workers: usize,
) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let manifest_path = dir.join(format!("{stem}.manifest.json"));
    fs::write(&csv_path, report.to_csv()).with_context(|| format!("writing {}", csv_path.display()))?;
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        experiment: report.experiment.clone(),
        config: command.clone(),
        seed: command.seed(),
        xi: command.xi(),
        mode: command.mode(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        params: report.params.clone(),
        summary: report.summary.clone(),
        warnings: report.warnings.clone(),
        timing: Timing {
            elapsed_seconds: report.elapsed.as_secs_f64(),
            workers,
        },
        csv_file: format!("{stem}.csv"),
        csv_header_hash: header_hash(&report.header()),
    };
    let text = serde_json::to_string_pretty(&manifest)?;
    fs::write(&manifest_path, text + "\n").with_context(|| format!("writing {}", manifest_path.display()))?;
    Ok((csv_path, manifest_path))
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
}

/// A command stored as TOML, e.g. `command = "lemma11"` with its arguments.
pub fn read_config(path: &Path) -> Result<Command> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}
