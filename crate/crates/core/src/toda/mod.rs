//! Open Coxeter–Toda lattice from the Cartan involution of `sl_{n+1}`: the
//! tridiagonal reflection monodromy, its Lax flow, and the Iwasawa
//! factorization solution.

pub mod factorization;
pub mod lax;
pub mod monodromy;

pub use factorization::{expm, factorization_solve, iwasawa_factor, traceless};
pub use lax::{calibrate_kappa, calibrate_kappa_on, commutator, flow_derivative, lax_generator, KappaCalibration};
pub use monodromy::{
    bidiagonal_factor, build_monodromy, chart_ab, monodromy_dense, monodromy_entries, reflection_hamiltonian,
    spectral_invariants, trace_formula, SpectralInvariants, TodaChart, TridiagonalMonodromy,
};
