//! Fixed-point subalgebra `k = g^σ`, eigenspace decomposition `g = k ⊕ p`
//! and the block decomposition of an r-matrix for finite-order `σ`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lie::algebra::LieAlgebraData;
use crate::lie::tensor::{Automorphism, SubalgebraBasis, TensorElement};

/// Largest order probed when `σ` carries no order hint.
pub const MAX_PROBED_ORDER: u32 = 24;

/// A real eigenspace (or conjugate pair of eigenspaces) of `σ` with eigenvalue `≠ 1`.
#[derive(Debug, Clone)]
pub struct Eigenspace {
    /// Eigenvalue `e^{±2πi·j/m}` recorded as `j/m`.
    pub angle_fraction: (u32, u32),
    pub basis: SubalgebraBasis,
    pub projector: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub order: u32,
    pub k: SubalgebraBasis,
    pub k_projector: DMatrix<f64>,
    pub p: Vec<Eigenspace>,
}

impl Decomposition {
    /// Projector onto `p = ⊕ p_i` along `k`.
    pub fn p_projector(&self) -> DMatrix<f64> {
        let d = self.k_projector.nrows();
        DMatrix::identity(d, d) - &self.k_projector
    }

    pub fn dim_p(&self) -> usize {
        self.p.iter().map(|e| e.basis.len()).sum()
    }
}

fn column_space(label: String, m: &DMatrix<f64>) -> Result<SubalgebraBasis> {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let max = svd.singular_values.max();
    let mut vectors = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s > 1e-9 * max.max(1.0) {
            let mut v: Vec<f64> = u.column(i).iter().copied().collect();
            for x in &mut v {
                if x.abs() < 1e-15 {
                    *x = 0.0;
                }
            }
            vectors.push(v);
        }
    }
    SubalgebraBasis::new(label, vectors)
}

/// Fixed subalgebra and eigenspaces of a finite-order automorphism.
pub fn fixed_subalgebra(alg: &LieAlgebraData, sigma: &Automorphism) -> Result<Decomposition> {
    if sigma.dim() != alg.dim() {
        return Err(Error::Dimension { expected: alg.dim(), got: sigma.dim() });
    }
    let m = sigma.finite_order(MAX_PROBED_ORDER, 1e-10).ok_or_else(|| {
        Error::Unsupported(format!("{} has no finite order ≤ {MAX_PROBED_ORDER}", sigma.label()))
    })?;
    let d = alg.dim();
    let powers: Vec<DMatrix<f64>> = (0..m).map(|s| sigma.power(s)).collect();
    let spectral_projector = |j: u32| -> DMatrix<f64> {
        let mut acc = DMatrix::zeros(d, d);
        let paired = 2 * j != m && j != 0;
        for (s, pw) in powers.iter().enumerate() {
            let w = (2.0 * PI * (j as f64) * (s as f64) / (m as f64)).cos();
            acc += pw * (if paired { 2.0 * w } else { w });
        }
        acc / (m as f64)
    };
    let k_projector = spectral_projector(0);
    let k = column_space(format!("{}^{}", alg.name(), sigma.label()), &k_projector)?;
    let mut p = Vec::new();
    for j in 1..=m / 2 {
        let proj = spectral_projector(j);
        if proj.amax() < 1e-12 {
            continue;
        }
        let basis = column_space(format!("p[{j}/{m}]"), &proj)?;
        if basis.is_empty() {
            continue;
        }
        p.push(Eigenspace { angle_fraction: (j, m), basis, projector: proj });
    }
    Ok(Decomposition { order: m, k, k_projector, p })
}

/// The four blocks of `r` with respect to `g = k ⊕ p`.
#[derive(Debug, Clone)]
pub struct RBlocks {
    pub kk: TensorElement,
    pub kp: TensorElement,
    pub pk: TensorElement,
    pub pp: TensorElement,
}

impl RBlocks {
    pub fn pp_norm(&self) -> f64 {
        self.pp.norm()
    }

    pub fn sum(&self) -> TensorElement {
        self.kk.plus(&self.kp).plus(&self.pk).plus(&self.pp)
    }
}

/// Project `r` onto `k⊗k`, `k⊗p`, `p⊗k`, `p⊗p`.
pub fn r_block_decomposition(alg: &LieAlgebraData, r: &TensorElement, sigma: &Automorphism) -> Result<RBlocks> {
    r.require_order(2)?;
    r.require_dim(alg.dim())?;
    let dec = fixed_subalgebra(alg, sigma)?;
    blocks_from(&dec, r)
}

pub fn blocks_from(dec: &Decomposition, r: &TensorElement) -> Result<RBlocks> {
    let m = r.as_matrix()?;
    let pk = &dec.k_projector;
    let pp = dec.p_projector();
    let block = |a: &DMatrix<f64>, b: &DMatrix<f64>| TensorElement::from_matrix(&(a * &m * b.transpose()));
    Ok(RBlocks { kk: block(pk, pk), kp: block(pk, &pp), pk: block(&pp, pk), pp: block(&pp, &pp) })
}
