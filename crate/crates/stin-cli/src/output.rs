//! Result serialization: per-curve CSV files and the JSON run manifest.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;
use stin_core::engine::{CoverageEstimate, PilotDiscrepancy};

/// Nine significant digits, locale-free.
pub fn format_sig9(x: f64) -> String {
    format!("{x:.8e}")
}

/// `threshold_db,p_hat,ci_low,ci_high,n`
pub fn coverage_csv(curve: &[CoverageEstimate]) -> String {
    let mut out = String::from("threshold_db,p_hat,ci_low,ci_high,n\n");
    for e in curve {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_sig9(e.threshold_db),
            format_sig9(e.p_hat),
            format_sig9(e.ci_low),
            format_sig9(e.ci_high),
            e.n
        ));
    }
    out
}

/// `num_pilots,ks_mean,ci_low,ci_high,seeds`
pub fn discrepancy_csv(curve: &[PilotDiscrepancy]) -> String {
    let mut out = String::from("num_pilots,ks_mean,ci_low,ci_high,seeds\n");
    for e in curve {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.num_pilots,
            format_sig9(e.ks_mean),
            format_sig9(e.ci_low),
            format_sig9(e.ci_high),
            e.seeds
        ));
    }
    out
}

/// Reproducibility record: the embedded config text plus the seed fully
/// determine every CSV byte; runtime and version are informational.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario: String,
    pub master_seed: u64,
    pub version: String,
    pub runtime_seconds: f64,
    /// Curve label -> file name within the output directory.
    pub outputs: BTreeMap<String, String>,
    pub config_text: String,
}

fn io_context(path: &Path, err: io::Error) -> io::Error {
    io::Error::new(err.kind(), format!("{}: {err}", path.display()))
}

pub fn write_file(path: &Path, contents: &str) -> io::Result<()> {
    fs::write(path, contents).map_err(|e| io_context(path, e))
}

pub fn write_manifest(path: &Path, manifest: &RunManifest) -> io::Result<()> {
    let json = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    write_file(path, &(json + "\n"))
}

pub fn read_manifest(path: &Path) -> io::Result<RunManifest> {
    let text = fs::read_to_string(path).map_err(|e| io_context(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("{}: {e}", path.display())))
}
