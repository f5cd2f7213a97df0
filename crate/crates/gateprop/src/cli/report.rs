//! Machine-readable report emission: CSV schemas and the run manifest.
//!
//! Every report file is accompanied by a manifest echoing the tool version,
//! the full configuration (seeds included), and a digest of each input
//! file: enough to re-run the command and obtain byte-identical CSV
//! (timestamps excluded).

use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::oracle::FalsePositiveReport;

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    pub timestamp_unix: u64,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value, inputs: Vec<InputDigest>) -> Self {
        RunManifest {
            tool: "gateprop",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config,
            inputs,
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

pub fn digest_file(path: &Path) -> std::io::Result<InputDigest> {
    let bytes = std::fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(InputDigest {
        path: path.display().to_string(),
        sha256: hex::encode(hasher.finalize()),
    })
}

/// One row of the experiment report: one benchmark at one label fraction.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRow {
    pub benchmark: String,
    pub technique_a: String,
    pub technique_b: String,
    pub fraction: f64,
    pub trials: usize,
    pub mean_a: f64,
    pub mean_b: f64,
    pub diff: f64,
    pub t: f64,
    pub df: f64,
    pub p: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub significant: bool,
}

pub const EXPERIMENT_CSV_HEADER: &str = "benchmark,technique_a,technique_b,fraction,trials,\
mean_a,mean_b,diff,t,df,p,ci_lo,ci_hi,significant";

/// Shortest round-trip decimal, switching to scientific notation for tiny
/// magnitudes (p-values routinely underflow plain decimal readability).
fn fmt_f64(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn experiment_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(EXPERIMENT_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.benchmark,
            r.technique_a,
            r.technique_b,
            fmt_f64(r.fraction),
            r.trials,
            fmt_f64(r.mean_a),
            fmt_f64(r.mean_b),
            fmt_f64(r.diff),
            fmt_f64(r.t),
            fmt_f64(r.df),
            fmt_f64(r.p),
            fmt_f64(r.ci_lo),
            fmt_f64(r.ci_hi),
            r.significant
        );
    }
    out
}

pub const ORACLE_CSV_HEADER: &str = "circuit,technique,trial,output,constructive,oracle";

/// Per-(trial, output) comparison rows.
pub fn oracle_rows_csv(report: &FalsePositiveReport) -> String {
    let mut out = String::from(ORACLE_CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            report.circuit,
            report.technique.slug(),
            row.trial,
            row.output,
            row.constructive as u8,
            row.oracle as u8
        );
    }
    out
}
