use crate::dual::{Dual, Real};
use crate::error::{Error, Result};

/// Point of a phase space in its coordinate chart.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceState {
    pub coords: Vec<f64>,
}

impl PhaseSpaceState {
    pub fn new(coords: Vec<f64>) -> Self {
        PhaseSpaceState { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }
}

impl From<Vec<f64>> for PhaseSpaceState {
    fn from(coords: Vec<f64>) -> Self {
        PhaseSpaceState { coords }
    }
}

/// Coordinate Poisson tensor `Π^{ij}(x) = {x_i, x_j}`.
///
/// `tensor` is written once over [`Real`] so its derivatives (needed for the
/// Jacobi identity check) come from dual-number evaluation.
pub trait PoissonStructure: Sync {
    fn n_coords(&self) -> usize;

    fn coord_labels(&self) -> Vec<String>;

    /// Row-major `n × n` antisymmetric matrix.
    fn tensor<S: Real>(&self, x: &[S]) -> Vec<S>;

    /// Structure-specific admissibility (finite coordinates, nonzero `k`, ...).
    fn check_state(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_coords() {
            return Err(Error::Dimension { expected: self.n_coords(), got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite coordinate".into()));
        }
        Ok(())
    }
}

/// Canonical coordinates `(p_1..p_n, q_1..q_n)` with `{p_k, q_k} = 1`.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalStructure {
    pub n: usize,
}

impl CanonicalStructure {
    pub fn new(n: usize) -> Self {
        CanonicalStructure { n }
    }

    pub fn p_index(&self, k: usize) -> usize {
        k
    }

    pub fn q_index(&self, k: usize) -> usize {
        self.n + k
    }
}

impl PoissonStructure for CanonicalStructure {
    fn n_coords(&self) -> usize {
        2 * self.n
    }

    fn coord_labels(&self) -> Vec<String> {
        (1..=self.n)
            .map(|k| format!("p_{k}"))
            .chain((1..=self.n).map(|k| format!("q_{k}")))
            .collect()
    }

    fn tensor<S: Real>(&self, _x: &[S]) -> Vec<S> {
        let d = 2 * self.n;
        let mut pi = vec![S::zero(); d * d];
        for k in 0..self.n {
            pi[k * d + self.n + k] = S::one();
            pi[(self.n + k) * d + k] = -S::one();
        }
        pi
    }
}

/// `N` independent copies of the `SL_2^*` bracket on `(k_n, e_n, f_n)`:
/// `{k,e} = ke`, `{k,f} = −kf`, `{e,f} = 2(k² − k⁻²)`.
#[derive(Debug, Clone, Copy)]
pub struct XxzStructure {
    pub sites: usize,
}

impl XxzStructure {
    pub fn new(sites: usize) -> Self {
        XxzStructure { sites }
    }
}

impl PoissonStructure for XxzStructure {
    fn n_coords(&self) -> usize {
        3 * self.sites
    }

    fn coord_labels(&self) -> Vec<String> {
        (1..=self.sites)
            .flat_map(|n| [format!("k_{n}"), format!("e_{n}"), format!("f_{n}")])
            .collect()
    }

    fn tensor<S: Real>(&self, x: &[S]) -> Vec<S> {
        let d = 3 * self.sites;
        let mut pi = vec![S::zero(); d * d];
        for s in 0..self.sites {
            let (ik, ie, if_) = (3 * s, 3 * s + 1, 3 * s + 2);
            let (k, e, f) = (x[ik], x[ie], x[if_]);
            let ke = k * e;
            let kf = k * f;
            let ef = (k * k - (k * k).recip()) * 2.0;
            pi[ik * d + ie] = ke;
            pi[ie * d + ik] = -ke;
            pi[ik * d + if_] = -kf;
            pi[if_ * d + ik] = kf;
            pi[ie * d + if_] = ef;
            pi[if_ * d + ie] = -ef;
        }
        pi
    }

    fn check_state(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_coords() {
            return Err(Error::Dimension { expected: self.n_coords(), got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite coordinate".into()));
        }
        for s in 0..self.sites {
            if x[3 * s] == 0.0 {
                return Err(Error::Domain(format!("k_{} = 0", s + 1)));
            }
        }
        Ok(())
    }
}

/// Constant Poisson tensor given explicitly.
#[derive(Debug, Clone)]
pub struct ConstantStructure {
    labels: Vec<String>,
    matrix: Vec<f64>,
}

impl ConstantStructure {
    pub fn new(labels: Vec<String>, matrix: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if matrix.len() != n * n {
            return Err(Error::Dimension { expected: n * n, got: matrix.len() });
        }
        for i in 0..n {
            for j in 0..n {
                if matrix[i * n + j] != -matrix[j * n + i] {
                    return Err(Error::Input("Poisson tensor must be antisymmetric".into()));
                }
            }
        }
        Ok(ConstantStructure { labels, matrix })
    }
}

impl PoissonStructure for ConstantStructure {
    fn n_coords(&self) -> usize {
        self.labels.len()
    }

    fn coord_labels(&self) -> Vec<String> {
        self.labels.clone()
    }

    fn tensor<S: Real>(&self, _x: &[S]) -> Vec<S> {
        self.matrix.iter().map(|&v| S::cst(v)).collect()
    }
}

/// Max-abs of `Π + Πᵀ` at a state.
pub fn antisymmetry_defect<P: PoissonStructure>(ps: &P, x: &[f64]) -> f64 {
    let n = ps.n_coords();
    let pi = ps.tensor(x);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((pi[i * n + j] + pi[j * n + i]).abs());
        }
    }
    worst
}

/// Max over coordinate triples of the cyclic sum
/// `Π^{il} ∂_l Π^{jk} + Π^{jl} ∂_l Π^{ki} + Π^{kl} ∂_l Π^{ij}`.
pub fn jacobi_defect<P: PoissonStructure>(ps: &P, x: &[f64]) -> f64 {
    let n = ps.n_coords();
    let pi = ps.tensor(x);
    // dpi[l][i*n + j] = ∂_l Π^{ij}
    let dpi: Vec<Vec<f64>> = (0..n)
        .map(|l| ps.tensor(&Dual::seed_axis(x, l)).iter().map(|d| d.eps).collect())
        .collect();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += pi[i * n + l] * dpi[l][j * n + k]
                        + pi[j * n + l] * dpi[l][k * n + i]
                        + pi[k * n + l] * dpi[l][i * n + j];
                }
                worst = worst.max(s.abs());
            }
        }
    }
    worst
}
