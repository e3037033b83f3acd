//! Classical XXZ chain with reflecting boundaries, realized with 2×2 Laurent
//! matrices in the evaluation representation.
//!
//! Boundary matrices enter all traces in the cleared (denominator-free)
//! normalization.

pub mod chain;
pub mod checks;
pub mod evolve;
pub mod laurent;
pub mod monodromy;

pub use chain::{
    casimir_value, k_matrix, lax_eval, lax_matrix, leaf_casimir, r12, trig_r_matrix, ChainState, KMatrix, KNormalization,
    SiteState, DEFAULT_LEAF_T, DEFAULT_SPREAD, DEFAULT_XI, M2,
};
pub use checks::{
    cybe_multiplicative_defect, k_reflection_defect, quantum_r, reflection_algebra_check, reflection_defect,
    semiclassical_check, sklyanin_defect, ReflectionDefects, SemiclassicalFit,
};
pub use evolve::{evolve_chain, ChainEvolution};
pub use laurent::{LaurentMatrix, LaurentPoly};
pub use monodromy::{
    casimir_observable, local_hamiltonian, local_hamiltonian_observable, local_terms, monodromy_det, monodromy_eval,
    pair_trace, product_formula_ratio, projector_degeneration, reflection_monodromy, transfer_eval, transfer_observable,
    transfer_value, unregularized_monodromy,
};
