use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest `‖A‖₁` handed to the Padé approximant after scaling.
const PADE_NORM: f64 = 0.5;
/// Diagonal Padé order; truncation error below 1e-20 at `PADE_NORM`.
const PADE_ORDER: usize = 8;
/// Largest `cond(M Mᵀ)` accepted by the factorization.
const MAX_CONDITION: f64 = 1e13;
/// Per-slice bound on `|c|·Δt·spread(S)`, keeping each factor well conditioned.
const SLICE_BUDGET: f64 = 2.0;
const MAX_SLICES: usize = 1_000_000;

fn norm1(a: &DMatrix<f64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(A)` by scaling and squaring with a diagonal Padé approximant.
pub fn expm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !a.is_square() {
        return Err(Error::Input("matrix exponential needs a square matrix".into()));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Range("non-finite exponent".into()));
    }
    let n = a.nrows();
    let nrm = norm1(a);
    let s = if nrm > PADE_NORM { (nrm / PADE_NORM).log2().ceil() as i32 } else { 0 };
    let scaled = a / 2f64.powi(s);

    // c_k = (2q−k)! q! / ((2q)! k! (q−k)!)
    let q = PADE_ORDER;
    let mut c = vec![1.0; q + 1];
    for k in 1..=q {
        c[k] = c[k - 1] * (q + 1 - k) as f64 / (k * (2 * q + 1 - k)) as f64;
    }
    let id = DMatrix::<f64>::identity(n, n);
    let mut num = id.clone() * c[0];
    let mut den = id.clone() * c[0];
    let mut pw = id.clone();
    for (k, ck) in c.iter().enumerate().skip(1) {
        pw = &pw * &scaled;
        let term = &pw * *ck;
        num += &term;
        if k % 2 == 0 {
            den += &term;
        } else {
            den -= &term;
        }
    }
    let mut r = den.lu().solve(&num).ok_or_else(|| Error::Numerical("singular Padé denominator".into()))?;
    for _ in 0..s {
        r = &r * &r;
    }
    if r.iter().any(|v| !v.is_finite()) {
        return Err(Error::Range("matrix exponential overflowed; reduce the time step (time-slicing)".into()));
    }
    Ok(r)
}

/// `M = b·k` with `b` upper triangular (positive diagonal) and `k ∈ SO(n)`,
/// via the reverse Cholesky factor of `M Mᵀ`.
pub fn iwasawa_factor(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if !m.is_square() {
        return Err(Error::Input("Iwasawa factorization needs a square matrix".into()));
    }
    let n = m.nrows();
    let det = m.determinant();
    if !(det > 0.0) {
        return Err(Error::Domain(format!("det M = {det:e} is not positive")));
    }
    let a = m * m.transpose();
    // J A J with J the exchange matrix
    let flipped = DMatrix::from_fn(n, n, |i, j| a[(n - 1 - i, n - 1 - j)]);
    let chol = flipped
        .cholesky()
        .ok_or_else(|| Error::Conditioning("M Mᵀ is not numerically positive definite".into()))?;
    let l = chol.l();
    let b = DMatrix::from_fn(n, n, |i, j| l[(n - 1 - i, n - 1 - j)]);
    let (dmin, dmax) = b.diagonal().iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &d| (lo.min(d), hi.max(d)));
    let cond = (dmax / dmin).powi(2);
    if !(cond < MAX_CONDITION) {
        return Err(Error::Conditioning(format!("cond(M Mᵀ) ≈ {cond:e}")));
    }
    let k = b
        .solve_upper_triangular(m)
        .ok_or_else(|| Error::Conditioning("triangular factor is singular".into()))?;
    Ok((b, k))
}

/// Traceless part `A − (tr A / n)·I`.
pub fn traceless(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    a - DMatrix::identity(n, n) * (a.trace() / n as f64)
}

fn symmetrize(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// `T(t)` for the flow of `tr T^m` with Lax generator normalization `κ`.
///
/// Each slice factors `exp(−κ·m·Δt·π₀(T^m)) = b·k` and conjugates `T ↦ k T kᵀ`.
/// The minus sign makes the induced generator equal `κ·m·(U − Uᵀ)`, `U` the
/// strict upper part of `T^m`. Slices keep `cond(M Mᵀ)` near `e^{2·SLICE_BUDGET}`.
pub fn factorization_solve(t0: &DMatrix<f64>, m: u32, t: f64, kappa: f64) -> Result<DMatrix<f64>> {
    if !t0.is_square() {
        return Err(Error::Input("T0 must be square".into()));
    }
    if m == 0 {
        return Err(Error::Input("Hamiltonian index must be at least 1".into()));
    }
    if !t.is_finite() || !kappa.is_finite() {
        return Err(Error::Input("time and kappa must be finite".into()));
    }
    if (t0 - t0.transpose()).amax() > 1e-12 * t0.amax().max(1.0) {
        return Err(Error::Input("T0 must be symmetric".into()));
    }
    if t0.clone().cholesky().is_none() {
        return Err(Error::Domain("T0 must be positive definite".into()));
    }
    if t == 0.0 {
        return Ok(t0.clone());
    }
    let c = -kappa * m as f64;
    let eig = t0.clone().symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    let spread = hi.powi(m as i32) - lo.powi(m as i32);
    let work = (c * t).abs() * spread;
    let slices = (work / SLICE_BUDGET).ceil().max(1.0);
    if !(slices <= MAX_SLICES as f64) {
        return Err(Error::Range(format!("|κ·m·t|·spread = {work:e} needs more than {MAX_SLICES} slices")));
    }
    let slices = slices as usize;
    let dt = t / slices as f64;
    let mut cur = t0.clone();
    for _ in 0..slices {
        let mut pw = cur.clone();
        for _ in 1..m {
            pw = &pw * &cur;
        }
        let gen = traceless(&symmetrize(&pw)) * (c * dt);
        let (_, k) = iwasawa_factor(&expm(&gen)?)?;
        cur = symmetrize(&(&k * &cur * k.transpose()));
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    fn expm_via_eigen(a: &DMatrix<f64>) -> DMatrix<f64> {
        let e = SymmetricEigen::new(a.clone());
        let d = DMatrix::from_diagonal(&e.eigenvalues.map(f64::exp));
        &e.eigenvectors * d * e.eigenvectors.transpose()
    }

    #[test]
    fn expm_matches_eigen_oracle() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 0.5, -0.3, 0.5, -2.0, 0.7, -0.3, 0.7, 3.0]);
        let want = expm_via_eigen(&a);
        assert!((expm(&a).unwrap() - &want).amax() < 1e-13 * want.amax());
    }

    #[test]
    fn expm_rotation() {
        let th = 0.9f64;
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -th, th, 0.0]);
        let e = expm(&a).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
        assert!((e - want).amax() < 1e-15);
        assert_eq!(expm(&DMatrix::zeros(3, 3)).unwrap(), DMatrix::identity(3, 3));
    }

    #[test]
    fn expm_overflow_is_range_error() {
        let a = DMatrix::from_diagonal_element(2, 2, 1000.0);
        assert!(matches!(expm(&a), Err(Error::Range(_))));
    }

    #[test]
    fn iwasawa_trivial_cases() {
        let id = DMatrix::<f64>::identity(3, 3);
        let (b, k) = iwasawa_factor(&id).unwrap();
        assert!((b - &id).amax() < 1e-15 && (k - &id).amax() < 1e-15);
        let th = 0.4f64;
        let r = DMatrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
        let (b, k) = iwasawa_factor(&r).unwrap();
        assert!((b - DMatrix::identity(2, 2)).amax() < 1e-15);
        assert!((k - r).amax() < 1e-15);
    }

    #[test]
    fn iwasawa_errors() {
        let flip = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(iwasawa_factor(&flip), Err(Error::Domain(_))));
        let near = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-8]);
        assert!(matches!(iwasawa_factor(&near), Err(Error::Conditioning(_))));
    }

    #[test]
    fn traceless_projection() {
        let a = DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 1.0]);
        let p = traceless(&a);
        assert_eq!(p.trace(), 0.0);
        assert_eq!(p[(0, 1)], 1.0);
    }

    #[test]
    fn factorization_at_zero_time_and_isospectral() {
        let t0 = DMatrix::from_row_slice(3, 3, &[2.0, 0.7, 0.0, 0.7, 1.5, 0.4, 0.0, 0.4, 0.8]);
        assert_eq!(factorization_solve(&t0, 1, 0.0, -2.0).unwrap(), t0);
        let e0 = t0.clone().symmetric_eigenvalues();
        for &t in &[0.3, 2.0, 10.0] {
            let tt = factorization_solve(&t0, 2, t, -2.0).unwrap();
            let e = tt.symmetric_eigenvalues();
            let (mut a, mut b): (Vec<f64>, Vec<f64>) = (e0.iter().copied().collect(), e.iter().copied().collect());
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12, "{t}: {x} vs {y}");
            }
        }
        let not_spd = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(factorization_solve(&not_spd, 1, 1.0, 1.0), Err(Error::Domain(_))));
    }
}
