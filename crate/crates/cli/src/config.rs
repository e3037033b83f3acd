//! Strictly parsed experiment configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use cre_core::xxz::{DEFAULT_LEAF_T, DEFAULT_SPREAD, DEFAULT_XI};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    VerifyLie,
    Toda,
    Xxz,
    Acceptance,
}

impl Kind {
    pub fn section(self) -> &'static str {
        match self {
            Kind::VerifyLie => "lie",
            Kind::Toda => "toda",
            Kind::Xxz => "xxz",
            Kind::Acceptance => "acceptance",
        }
    }
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Per-check tolerance overrides, keyed by check name.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lie: Option<LieSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toda: Option<TodaSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xxz: Option<XxzSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acceptance: Option<AcceptanceSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LieSection {
    /// Bundled algebra name; ignored when `algebra_file` is set.
    pub algebra: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra_file: Option<PathBuf>,
    pub automorphism: String,
    pub mcybe_pairs: usize,
}

impl Default for LieSection {
    fn default() -> Self {
        LieSection { algebra: "sl2".into(), algebra_file: None, automorphism: "cartan".into(), mcybe_pairs: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TodaSection {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<f64>>,
    /// Half-width of the random initial chart when `p`, `q` are absent.
    pub scale: f64,
    pub m: u32,
    pub t_final: f64,
    pub dt: f64,
    /// Fixed flow normalization; calibrated when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    pub calibration_samples: usize,
    pub commutation_samples: usize,
}

impl Default for TodaSection {
    fn default() -> Self {
        TodaSection {
            n: 2,
            p: None,
            q: None,
            scale: 0.5,
            m: 1,
            t_final: 1.0,
            dt: 0.01,
            kappa: None,
            calibration_samples: 20,
            commutation_samples: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XxzHamiltonian {
    Local,
    Transfer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct XxzSection {
    pub sites: usize,
    /// Common leaf parameter; `t_n` overrides it per site.
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_n: Option<Vec<f64>>,
    pub xi_plus: f64,
    pub xi_minus: f64,
    /// Initial `(k, e, f)` per site; random on-leaf sites when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<Vec<[f64; 3]>>,
    pub spread: f64,
    pub hamiltonian: XxzHamiltonian,
    /// Spectral parameter of the transfer-matrix Hamiltonian.
    pub hamiltonian_z: f64,
    pub t_final: f64,
    pub dt: f64,
    pub tau_points: Vec<f64>,
    /// Spectral parameters of the bracket checks.
    pub z: f64,
    pub w: f64,
    pub product_samples: usize,
}

impl Default for XxzSection {
    fn default() -> Self {
        XxzSection {
            sites: 2,
            t: DEFAULT_LEAF_T,
            t_n: None,
            xi_plus: DEFAULT_XI,
            xi_minus: DEFAULT_XI,
            initial: None,
            spread: DEFAULT_SPREAD,
            hamiltonian: XxzHamiltonian::Local,
            hamiltonian_z: 1.1,
            t_final: 1.0,
            dt: 0.005,
            tau_points: vec![0.7, 1.3],
            z: 0.8,
            w: 1.35,
            product_samples: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcceptanceSection {
    pub criteria: Vec<String>,
}

/// Byte offset to 1-based line and column.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
            CliError::Parse { line, column, message: e.message().trim().to_string() }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let present = [
            ("lie", self.lie.is_some()),
            ("toda", self.toda.is_some()),
            ("xxz", self.xxz.is_some()),
            ("acceptance", self.acceptance.is_some()),
        ];
        for (name, is_set) in present {
            if is_set && name != self.kind.section() {
                return Err(CliError::Config(format!("section [{name}] does not apply to kind {:?}", self.kind)));
            }
        }
        if self.kind == Kind::Acceptance && self.acceptance.is_none() {
            return Err(CliError::Config("kind acceptance needs an [acceptance] section with `criteria`".into()));
        }
        for (name, tol) in &self.tolerances {
            if !(*tol >= 0.0) {
                return Err(CliError::Config(format!("tolerance '{name}' must be non-negative, got {tol}")));
            }
        }
        Ok(())
    }

    pub fn lie(&self) -> LieSection {
        self.lie.clone().unwrap_or_default()
    }

    pub fn toda(&self) -> TodaSection {
        self.toda.clone().unwrap_or_default()
    }

    pub fn xxz(&self) -> XxzSection {
        self.xxz.clone().unwrap_or_default()
    }

    /// SHA-256 of the canonical JSON form, excluding the output directory.
    pub fn digest(&self) -> String {
        let mut c = self.clone();
        c.output_dir = None;
        let json = serde_json::to_string(&c).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}
