use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dual::Real;
use crate::error::{Error, Result};
use crate::poisson::{CanonicalStructure, Observable, PhaseSpaceState};

/// Canonical chart `(p, q)` of rank `n`; the boundary values `q_0 = q_{n+1} = 0`
/// are implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct TodaChart {
    pub n: usize,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

impl TodaChart {
    pub fn new(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::Input("rank must be positive".into()));
        }
        if q.len() != p.len() {
            return Err(Error::Dimension { expected: p.len(), got: q.len() });
        }
        if p.iter().chain(&q).any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite chart coordinate".into()));
        }
        Ok(TodaChart { n: p.len(), p, q })
    }

    /// Chart at the origin `p = q = 0`.
    pub fn origin(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n], vec![0.0; n])
    }

    /// Coordinates uniform in `[-scale, scale]`.
    pub fn random(n: usize, scale: f64, rng: &mut impl Rng) -> Result<Self> {
        let mut draw = || if scale > 0.0 { rng.random_range(-scale..scale) } else { 0.0 };
        let p = (0..n).map(|_| draw()).collect();
        let q = (0..n).map(|_| draw()).collect();
        Self::new(p, q)
    }

    pub fn random_seeded(n: usize, scale: f64, seed: u64) -> Result<Self> {
        Self::random(n, scale, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Layout `(p_1..p_n, q_1..q_n)` of [`CanonicalStructure`].
    pub fn to_state(&self) -> PhaseSpaceState {
        PhaseSpaceState::new(self.p.iter().chain(&self.q).copied().collect())
    }

    pub fn from_state(n: usize, s: &PhaseSpaceState) -> Result<Self> {
        if s.len() != 2 * n {
            return Err(Error::Dimension { expected: 2 * n, got: s.len() });
        }
        Self::new(s.coords[..n].to_vec(), s.coords[n..].to_vec())
    }

    pub fn structure(&self) -> CanonicalStructure {
        CanonicalStructure::new(self.n)
    }

    /// `a_k = e^{q_{k−1} − q_k}`, `k = 1..n+1`.
    pub fn a(&self) -> Vec<f64> {
        chart_ab(self.n, &self.to_state().coords).0
    }

    /// `b_k = e^{p_k}`, `k = 1..n`.
    pub fn b(&self) -> Vec<f64> {
        chart_ab(self.n, &self.to_state().coords).1
    }
}

/// `(a_1..a_{n+1}, b_1..b_n)` from canonical coordinates `x = (p, q)`.
pub fn chart_ab<S: Real>(n: usize, x: &[S]) -> (Vec<S>, Vec<S>) {
    let q = |k: usize| if k == 0 || k == n + 1 { S::zero() } else { x[n + k - 1] };
    let a = (1..=n + 1).map(|k| (q(k - 1) - q(k)).exp()).collect();
    let b = (0..n).map(|k| x[k].exp()).collect();
    (a, b)
}

/// Symmetric tridiagonal `T = X Xᵀ` with `X` upper bidiagonal
/// (`X_kk = a_k`, `X_{k,k+1} = b_k`).
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMonodromy {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalMonodromy {
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        let s = self.size();
        let mut t = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diag));
        for (k, &o) in self.offdiag.iter().enumerate() {
            t[(k, k + 1)] = o;
            t[(k + 1, k)] = o;
        }
        debug_assert_eq!(t.nrows(), s);
        t
    }
}

/// Diagonal and off-diagonal of `T` as functions of `(p, q)`.
pub fn monodromy_entries<S: Real>(n: usize, x: &[S]) -> (Vec<S>, Vec<S>) {
    let (a, b) = chart_ab(n, x);
    let mut diag: Vec<S> = (0..n).map(|k| a[k] * a[k] + b[k] * b[k]).collect();
    diag.push(a[n] * a[n]);
    let off = (0..n).map(|k| b[k] * a[k + 1]).collect();
    (diag, off)
}

/// Dense row-major `T` over any scalar.
pub fn monodromy_dense<S: Real>(n: usize, x: &[S]) -> Vec<S> {
    let (d, o) = monodromy_entries(n, x);
    let s = n + 1;
    let mut t = vec![S::zero(); s * s];
    for k in 0..s {
        t[k * s + k] = d[k];
    }
    for k in 0..n {
        t[k * s + k + 1] = o[k];
        t[(k + 1) * s + k] = o[k];
    }
    t
}

pub fn build_monodromy(chart: &TodaChart) -> TridiagonalMonodromy {
    let (diag, offdiag) = monodromy_entries(chart.n, &chart.to_state().coords);
    TridiagonalMonodromy { diag, offdiag }
}

/// The upper-bidiagonal factor `X` of `T = X Xᵀ`.
pub fn bidiagonal_factor(chart: &TodaChart) -> DMatrix<f64> {
    let (a, b) = (chart.a(), chart.b());
    let s = chart.n + 1;
    let mut x = DMatrix::zeros(s, s);
    for k in 0..s {
        x[(k, k)] = a[k];
    }
    for k in 0..chart.n {
        x[(k, k + 1)] = b[k];
    }
    x
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralInvariants {
    /// `tr T^k` for `k = 1..size`.
    pub traces: Vec<f64>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
}

pub fn spectral_invariants(t: &DMatrix<f64>) -> Result<SpectralInvariants> {
    if !t.is_square() {
        return Err(Error::Input("matrix must be square".into()));
    }
    let scale = t.amax().max(1.0);
    if (t - t.transpose()).amax() > 1e-12 * scale {
        return Err(Error::Input("matrix must be symmetric".into()));
    }
    let eig = SymmetricEigen::try_new(t.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))?;
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let mut traces = Vec::with_capacity(t.nrows());
    let mut pw = t.clone();
    for k in 0..t.nrows() {
        if k > 0 {
            pw = &pw * t;
        }
        traces.push(pw.trace());
    }
    Ok(SpectralInvariants { traces, eigenvalues })
}

/// `tr T^m` as an observable on `(p, q)`.
pub fn reflection_hamiltonian(n: usize, m: u32) -> Result<Observable> {
    if m == 0 {
        return Err(Error::Input("Hamiltonian index must be at least 1".into()));
    }
    Ok(Observable::new(format!("trT{m}"), move |x| {
        let t = monodromy_dense(n, x);
        trace_power(&t, n + 1, m)
    }))
}

/// Closed form `Σ_{k=1}^{n+1} e^{2(q_{k−1}−q_k)} + Σ_{k=1}^n e^{2p_k}`.
pub fn trace_formula(n: usize) -> Observable {
    Observable::new("trT_formula", move |x| {
        let q = |k: usize| if k == 0 || k == n + 1 { Real::zero() } else { x[n + k - 1] };
        let mut s = Real::zero();
        for k in 1..=n + 1 {
            s += ((q(k - 1) - q(k)) * 2.0).exp();
        }
        for &pk in &x[..n] {
            s += (pk * 2.0).exp();
        }
        s
    })
}

pub(crate) fn matmul<S: Real>(a: &[S], b: &[S], s: usize) -> Vec<S> {
    let mut out = vec![S::zero(); s * s];
    for i in 0..s {
        for k in 0..s {
            let aik = a[i * s + k];
            for j in 0..s {
                out[i * s + j] += aik * b[k * s + j];
            }
        }
    }
    out
}

pub(crate) fn trace_power<S: Real>(t: &[S], s: usize, m: u32) -> S {
    let mut pw = t.to_vec();
    for _ in 1..m {
        pw = matmul(&pw, t, s);
    }
    let mut tr = S::zero();
    for i in 0..s {
        tr += pw[i * s + i];
    }
    tr
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_rank_one() {
        let t = build_monodromy(&TodaChart::origin(1).unwrap()).to_matrix();
        assert_eq!(t, DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]));
        let h = reflection_hamiltonian(1, 1).unwrap();
        assert_eq!(h.eval(&[0.0, 0.0]), 3.0);
    }

    #[test]
    fn bidiagonal_oracle_and_determinant() {
        for n in 1..=6 {
            let c = TodaChart::random_seeded(n, 1.0, n as u64).unwrap();
            let t = build_monodromy(&c).to_matrix();
            let x = bidiagonal_factor(&c);
            assert!((&t - &x * x.transpose()).amax() < 1e-12 * t.amax());
            assert!((t.determinant() - 1.0).abs() < 1e-10);
            assert!((c.a().iter().product::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_matches_closed_form() {
        for n in 1..=5 {
            let c = TodaChart::random_seeded(n, 0.8, 100 + n as u64).unwrap();
            let x = c.to_state().coords;
            let h = reflection_hamiltonian(n, 1).unwrap();
            let f = trace_formula(n);
            assert!((h.eval(&x) - f.eval(&x)).abs() < 1e-12 * f.eval(&x));
            let (gh, gf) = (h.gradient(&x).unwrap(), f.gradient(&x).unwrap());
            for (u, v) in gh.iter().zip(&gf) {
                assert!((u - v).abs() < 1e-12 * (1.0 + v.abs()));
            }
        }
    }

    #[test]
    fn spectral_examples() {
        let inv = spectral_invariants(&DMatrix::identity(3, 3)).unwrap();
        assert_eq!(inv.eigenvalues, vec![1.0, 1.0, 1.0]);
        assert_eq!(inv.traces, vec![3.0, 3.0, 3.0]);
        let t = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let inv = spectral_invariants(&t).unwrap();
        let r5 = 5f64.sqrt();
        assert!((inv.eigenvalues[0] - (3.0 - r5) / 2.0).abs() < 1e-14);
        assert!((inv.eigenvalues[1] - (3.0 + r5) / 2.0).abs() < 1e-14);
        assert!(spectral_invariants(&DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0])).is_err());
    }

    #[test]
    fn power_sums_match_traces() {
        let c = TodaChart::random_seeded(4, 0.7, 9).unwrap();
        let inv = spectral_invariants(&build_monodromy(&c).to_matrix()).unwrap();
        for (k, tr) in inv.traces.iter().enumerate() {
            let ps: f64 = inv.eigenvalues.iter().map(|l| l.powi(k as i32 + 1)).sum();
            assert!((ps - tr).abs() < 1e-10 * tr.abs());
        }
        assert!(inv.eigenvalues.iter().all(|&l| l > 0.0));
    }

    #[test]
    fn chart_validation() {
        assert!(TodaChart::new(vec![], vec![]).is_err());
        assert!(TodaChart::new(vec![0.0], vec![0.0, 1.0]).is_err());
        assert!(TodaChart::new(vec![f64::NAN], vec![0.0]).is_err());
    }
}
