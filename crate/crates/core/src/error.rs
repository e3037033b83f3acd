use thiserror::Error;

/// Errors raised by the tensor, bracket and dynamics routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("tensor order mismatch: expected {expected}, got {got}")]
    Order { expected: usize, got: usize },

    #[error("trace form is singular (smallest singular value {0:e})")]
    Degenerate(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("step size underflow at t = {t}: dt = {dt:e}")]
    Stiffness { t: f64, dt: f64 },

    #[error("state diverged at t = {0}")]
    Divergence(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("ill-conditioned factorization: {0}")]
    Conditioning(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("convention mismatch: best-fit residual {residual:e} exceeds {tolerance:e} (kappa = {kappa})")]
    ConventionMismatch {
        kappa: f64,
        residual: f64,
        tolerance: f64,
    },

    #[error("degenerate parameterization: {0}")]
    DegenerateParameterization(String),

    #[error("site is off the leaf: casimir {casimir} differs from {expected}")]
    LeafMismatch { casimir: f64, expected: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
