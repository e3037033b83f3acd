//! Poisson brackets on explicit coordinate charts and Hamiltonian flows.
//!
//! Flow convention: `ḟ = {H, f}`.

pub mod bracket;
pub mod flow;
pub mod observable;
pub mod structure;

pub use bracket::{commutation_report, hamiltonian_vector_field, independence_rank, poisson_bracket, sample_states, CommutationReport};
pub use flow::{integrate_flow, StepControl, Trajectory};
pub use observable::Observable;
pub use structure::{
    antisymmetry_defect, jacobi_defect, CanonicalStructure, ConstantStructure, PhaseSpaceState, PoissonStructure, XxzStructure,
};
