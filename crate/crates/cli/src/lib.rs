//! Configuration, orchestration and artifact emission for the `cre` tool.

// `!(x <= tol)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod presets;
pub mod report;
pub mod run;

pub use config::{ExperimentConfig, Kind};
pub use error::CliError;
pub use report::{VerificationReport, ARTIFACT_VERSION};
pub use run::{run, Outcome};
