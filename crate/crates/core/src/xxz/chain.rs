use nalgebra::Matrix4;
use rand::Rng;

use crate::dual::Real;
use crate::error::{Error, Result};
use crate::xxz::laurent::{LaurentMatrix, LaurentPoly};

/// Tolerance on `|ω_n − (t_n² + t_n⁻²)|` for a site to count as on its leaf.
pub const LEAF_TOL: f64 = 1e-10;

/// Default homogeneous leaf parameter for sampled chains.
pub const DEFAULT_LEAF_T: f64 = 2.0;
/// Default boundary parameters `ξ_±`.
pub const DEFAULT_XI: f64 = 2.0;
/// Default `|log(k_n / t)|` bound for sampled sites; keeps `e_n f_n` of order
/// 1e-3 so the local-Hamiltonian flow stays inside its log domain.
pub const DEFAULT_SPREAD: f64 = 1e-3;

/// 2×2 matrix over any scalar.
pub type M2<S> = [[S; 2]; 2];

pub fn mul2<S: Real>(a: &M2<S>, b: &M2<S>) -> M2<S> {
    let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn trace2<S: Real>(a: &M2<S>) -> S {
    a[0][0] + a[1][1]
}

/// Casimir `k² + k⁻² + ef`.
pub fn casimir_value<S: Real>(k: S, e: S, f: S) -> S {
    k * k + (k * k).recip() + e * f
}

/// `t² + t⁻²`.
pub fn leaf_casimir(t: f64) -> f64 {
    t * t + (t * t).recip()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteState {
    pub k: f64,
    pub e: f64,
    pub f: f64,
}

impl SiteState {
    pub fn new(k: f64, e: f64, f: f64) -> Result<Self> {
        if !(k.is_finite() && e.is_finite() && f.is_finite()) {
            return Err(Error::Domain("non-finite site coordinate".into()));
        }
        if k == 0.0 {
            return Err(Error::Domain("k = 0".into()));
        }
        Ok(SiteState { k, e, f })
    }

    /// Solve `f` from `ω = t² + t⁻²` given `k` and `e ≠ 0`.
    pub fn on_leaf(k: f64, e: f64, t: f64) -> Result<Self> {
        if e == 0.0 {
            return Err(Error::DegenerateParameterization("e = 0 leaves f undetermined".into()));
        }
        Self::new(k, e, (leaf_casimir(t) - k * k - (k * k).recip()) / e)
    }

    pub fn casimir(&self) -> f64 {
        casimir_value(self.k, self.e, self.f)
    }
}

/// Sites `(k_n, e_n, f_n)`, their leaf parameters `t_n` and the boundary
/// parameters `ξ_±`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    pub sites: Vec<SiteState>,
    pub leaf_params: Vec<f64>,
    pub xi_plus: f64,
    pub xi_minus: f64,
}

impl ChainState {
    pub fn new(sites: Vec<SiteState>, leaf_params: Vec<f64>, xi_plus: f64, xi_minus: f64) -> Result<Self> {
        if leaf_params.len() != sites.len() {
            return Err(Error::Dimension { expected: sites.len(), got: leaf_params.len() });
        }
        for xi in [xi_plus, xi_minus] {
            if xi == 0.0 || !xi.is_finite() {
                return Err(Error::Domain(format!("boundary parameter ξ = {xi} must be finite and nonzero")));
            }
        }
        for (s, &t) in sites.iter().zip(&leaf_params) {
            if t == 0.0 || !t.is_finite() {
                return Err(Error::Domain(format!("leaf parameter t = {t} must be finite and nonzero")));
            }
            let (w, want) = (s.casimir(), leaf_casimir(t));
            if !((w - want).abs() <= LEAF_TOL) {
                return Err(Error::LeafMismatch { casimir: w, expected: want });
            }
        }
        Ok(ChainState { sites, leaf_params, xi_plus, xi_minus })
    }

    /// Random on-leaf chain: `k_n = t·e^u`, `u ∈ [−spread, spread]`,
    /// `|e_n| ∈ [0.3, 1]` with random sign, and `f_n` solved from the leaf.
    pub fn random_on_leaf(n: usize, t: f64, xi_plus: f64, xi_minus: f64, spread: f64, rng: &mut impl Rng) -> Result<Self> {
        let sites = (0..n)
            .map(|_| {
                let u = if spread > 0.0 { rng.random_range(-spread..spread) } else { 0.0 };
                let mag: f64 = rng.random_range(0.3..1.0);
                let e = if rng.random_bool(0.5) { mag } else { -mag };
                SiteState::on_leaf(t * u.exp(), e, t)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sites, vec![t; n], xi_plus, xi_minus)
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    /// `(k_1, e_1, f_1, …, k_N, e_N, f_N)`, the layout of [`crate::poisson::XxzStructure`].
    pub fn coords(&self) -> Vec<f64> {
        self.sites.iter().flat_map(|s| [s.k, s.e, s.f]).collect()
    }

    /// Same leaf and boundary data with new coordinates (leaf membership not re-checked).
    pub fn with_coords(&self, x: &[f64]) -> Result<Self> {
        if x.len() != 3 * self.n_sites() {
            return Err(Error::Dimension { expected: 3 * self.n_sites(), got: x.len() });
        }
        let sites = x.chunks(3).map(|c| SiteState::new(c[0], c[1], c[2])).collect::<Result<Vec<_>>>()?;
        Ok(ChainState { sites, ..self.clone() })
    }

    /// The common leaf parameter of a homogeneous chain.
    pub fn homogeneous_t(&self) -> Result<f64> {
        let t = *self.leaf_params.first().ok_or_else(|| Error::Input("empty chain has no leaf parameter".into()))?;
        if self.leaf_params.iter().any(|&s| s != t) {
            return Err(Error::Input("chain is not homogeneous (leaf parameters differ)".into()));
        }
        Ok(t)
    }
}

/// `L(z) = [[zk − z⁻¹k⁻¹, e], [f, zk⁻¹ − z⁻¹k]]`.
pub fn lax_matrix(s: &SiteState) -> Result<LaurentMatrix> {
    if s.k == 0.0 {
        return Err(Error::Domain("k = 0".into()));
    }
    let ki = 1.0 / s.k;
    Ok(LaurentMatrix::new(
        LaurentPoly::from_terms([(1, s.k), (-1, -ki)]),
        LaurentPoly::constant(s.e),
        LaurentPoly::constant(s.f),
        LaurentPoly::from_terms([(1, ki), (-1, -s.k)]),
    ))
}

/// `L(z)` evaluated pointwise over any scalar.
pub fn lax_eval<S: Real>(k: S, e: S, f: S, z: f64) -> M2<S> {
    let ki = k.recip();
    let zi = 1.0 / z;
    [[k * z - ki * zi, e], [f, ki * z - k * zi]]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KNormalization {
    /// `diag(1, (ξz⁻¹ − ξ⁻¹z)/(ξz − ξ⁻¹z⁻¹))`.
    Sklyanin,
    /// `diag(ξz − ξ⁻¹z⁻¹, ξz⁻¹ − ξ⁻¹z)`.
    Cleared,
}

/// Diagonal boundary matrix `K(z; ξ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMatrix {
    pub xi: f64,
    pub normalization: KNormalization,
}

pub fn k_matrix(xi: f64, normalization: KNormalization) -> Result<KMatrix> {
    if xi == 0.0 || !xi.is_finite() {
        return Err(Error::Domain(format!("ξ = {xi} must be finite and nonzero")));
    }
    Ok(KMatrix { xi, normalization })
}

impl KMatrix {
    /// Cleared-mode entries as Laurent polynomials.
    pub fn cleared(&self) -> LaurentMatrix {
        let (x, xi) = (self.xi, 1.0 / self.xi);
        LaurentMatrix::new(
            LaurentPoly::from_terms([(1, x), (-1, -xi)]),
            LaurentPoly::zero(),
            LaurentPoly::zero(),
            LaurentPoly::from_terms([(-1, x), (1, -xi)]),
        )
    }

    pub fn eval(&self, z: f64) -> Result<M2<f64>> {
        if z == 0.0 {
            return Err(Error::Domain("K(z) at z = 0".into()));
        }
        let (x, xi) = (self.xi, 1.0 / self.xi);
        let a = x * z - xi / z;
        let d = x / z - xi * z;
        match self.normalization {
            KNormalization::Cleared => Ok([[a, 0.0], [0.0, d]]),
            KNormalization::Sklyanin => {
                if a == 0.0 {
                    return Err(Error::Pole(format!("K(z; ξ) has a pole at z = {z}")));
                }
                Ok([[1.0, 0.0], [0.0, d / a]])
            }
        }
    }
}

/// Cleared `K(z; ξ)` over any scalar (the entries are state independent).
pub fn k_cleared_eval<S: Real>(xi: f64, z: f64) -> M2<S> {
    let a = xi * z - 1.0 / (xi * z);
    let d = xi / z - z / xi;
    [[S::cst(a), S::zero()], [S::zero(), S::cst(d)]]
}

/// `r(z, w)` in the basis `e₁⊗e₁, e₁⊗e₂, e₂⊗e₁, e₂⊗e₂`.
pub fn trig_r_matrix(z: f64, w: f64) -> Result<Matrix4<f64>> {
    let den = z * z - w * w;
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Pole(format!("r(z, w) has a pole at z² = w² (z = {z}, w = {w})")));
    }
    let a = (z * z + w * w) / den / 2.0;
    let b = 2.0 * z * w / den;
    Ok(Matrix4::new(a, 0.0, 0.0, 0.0, 0.0, -a, b, 0.0, 0.0, b, -a, 0.0, 0.0, 0.0, 0.0, a))
}

/// One-variable form `r₁₂(u) = r(u, 1)`.
pub fn r12(u: f64) -> Result<Matrix4<f64>> {
    trig_r_matrix(u, 1.0)
}
