//! Tensor algebra over explicit Lie algebras: structure constants,
//! automorphisms, r-matrices and the reflection / Yang–Baxter defects.

pub mod algebra;
pub mod decomposition;
pub mod defects;
pub mod exact;
pub mod presets;
pub mod tensor;

pub use algebra::{gl2, sl, AlgebraFile, LieAlgebraData, SlLayout};
pub use decomposition::{fixed_subalgebra, r_block_decomposition, Decomposition, Eigenspace, RBlocks};
pub use defects::{ad_action, casimir, cobracket, cre_defect, cybe_defect, invariance_defect, mcybe_defect, operator_form};
pub use tensor::{Automorphism, SubalgebraBasis, TensorElement};
