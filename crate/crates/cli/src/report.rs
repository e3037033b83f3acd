//! Verification report and artifact writing.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::config::{ExperimentConfig, Kind};
use crate::error::CliError;

pub const ARTIFACT_VERSION: &str = concat!("cre-", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportCheck {
    pub name: String,
    /// `null` when the check could not be evaluated.
    pub defect: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ReportCheck {
    pub fn measured(name: &str, defect: f64, tolerance: f64) -> Self {
        ReportCheck { name: name.into(), defect: Some(defect), tolerance, pass: defect <= tolerance, error: None }
    }

    pub fn failed(name: &str, tolerance: f64, error: String) -> Self {
        ReportCheck { name: name.into(), defect: None, tolerance, pass: false, error: Some(error) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub artifact_version: String,
    pub config_digest: String,
    pub kind: Kind,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<ReportCheck>,
}

impl VerificationReport {
    pub fn new(config: &ExperimentConfig, checks: Vec<ReportCheck>) -> Self {
        VerificationReport {
            artifact_version: ARTIFACT_VERSION.into(),
            config_digest: config.digest(),
            kind: config.kind,
            seed: config.seed,
            pass: !checks.is_empty() && checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One line per check for the terminal.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let defect = c.defect.map_or_else(|| "n/a".to_string(), |d| format!("{d:.3e}"));
            out.push_str(&format!(
                "{} {:<32} defect {:>10}  tol {:.1e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                defect,
                c.tolerance
            ));
            if let Some(e) = &c.error {
                out.push_str(&format!("  ({e})"));
            }
            out.push('\n');
        }
        out.push_str(if self.pass { "overall: PASS\n" } else { "overall: FAIL\n" });
        out
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Write `report.json`, `timings.json` and the given data files into `dir`.
pub fn write_artifacts(
    dir: &Path,
    report: &VerificationReport,
    timings: &BTreeMap<String, f64>,
    data_files: &[(String, String)],
) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    write(dir, "report.json", &report.to_json())?;
    write(dir, "timings.json", &(serde_json::to_string_pretty(timings).expect("timings serialize") + "\n"))?;
    for (name, contents) in data_files {
        write(dir, name, contents)?;
    }
    Ok(())
}
