//! Integrable systems built from solutions of the classical reflection equation.
//!
//! * [`lie`]: Lie algebra tensors and the defect functionals (reflection,
//!   Yang–Baxter, modified Yang–Baxter, invariance).
//! * [`poisson`]: Poisson brackets on explicit coordinate charts, evaluated with
//!   exact forward-mode derivatives, and a Runge–Kutta flow integrator.
//! * [`toda`]: the symmetric tridiagonal reflection monodromy of the open
//!   Coxeter–Toda lattice, its Lax flow and the Iwasawa factorization solution.
//! * [`suite`]: the named property checks run by the acceptance suite and the CLI.
//! * [`xxz`]: Laurent-matrix model of the classical XXZ chain with reflecting
//!   boundaries.

// `!(x <= tol)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dual;
pub mod error;
pub mod lie;
pub mod poisson;
pub mod suite;
pub mod toda;
pub mod xxz;

pub use dual::{Dual, Real};
pub use error::{Error, Result};
