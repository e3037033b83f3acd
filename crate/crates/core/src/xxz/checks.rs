use nalgebra::{DMatrix, Matrix4};
use serde::Serialize;

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::poisson::{poisson_bracket, Observable, PhaseSpaceState, XxzStructure};
use crate::xxz::chain::{k_cleared_eval, lax_eval, r12, trig_r_matrix, ChainState, SiteState, M2};
use crate::xxz::monodromy::monodromy_eval;

fn kron_left(m: &M2<f64>) -> Matrix4<f64> {
    Matrix4::from_fn(|r, c| if r % 2 == c % 2 { m[r / 2][c / 2] } else { 0.0 })
}

fn kron_right(m: &M2<f64>) -> Matrix4<f64> {
    Matrix4::from_fn(|r, c| if r / 2 == c / 2 { m[r % 2][c % 2] } else { 0.0 })
}

/// `B[(2i+j),(2k+l)] = {M_ik(z), M_jl(w)}` for a matrix-valued function
/// `M(x; z)` of the coordinates.
fn bracket_matrix<F>(sites: usize, x: &[f64], z: f64, w: f64, m: F) -> Result<Matrix4<f64>>
where
    F: Fn(&[Dual], f64) -> M2<Dual> + Send + Sync + Clone + 'static,
{
    let ps = XxzStructure::new(sites);
    let state = PhaseSpaceState::new(x.to_vec());
    let entry = |i: usize, k: usize, at: f64| {
        let m = m.clone();
        Observable::new(format!("M{i}{k}({at})"), move |x| m(x, at)[i][k])
    };
    let mut out = Matrix4::zeros();
    for i in 0..2 {
        for k in 0..2 {
            let a = entry(i, k, z);
            for j in 0..2 {
                for l in 0..2 {
                    out[(2 * i + j, 2 * k + l)] = poisson_bracket(&ps, &a, &entry(j, l, w), &state)?;
                }
            }
        }
    }
    Ok(out)
}

fn check_generic(z: f64, w: f64) -> Result<()> {
    if z == 0.0 || w == 0.0 || !z.is_finite() || !w.is_finite() {
        return Err(Error::Domain(format!("spectral parameters must be finite and nonzero (z = {z}, w = {w})")));
    }
    if z * z == w * w {
        return Err(Error::Domain(format!("r(z/w) has a pole at z = ±w (z = {z}, w = {w})")));
    }
    Ok(())
}

/// Max-abs of `{L₁(z), L₂(w)} − [r₁₂(z/w), L₁(z)L₂(w)]` for one site.
pub fn sklyanin_defect(s: &SiteState, z: f64, w: f64) -> Result<f64> {
    check_generic(z, w)?;
    let x = [s.k, s.e, s.f];
    let lhs = bracket_matrix(1, &x, z, w, |x, at| lax_eval(x[0], x[1], x[2], at))?;
    let l1 = kron_left(&lax_eval(s.k, s.e, s.f, z));
    let l2 = kron_right(&lax_eval(s.k, s.e, s.f, w));
    let r = r12(z / w)?;
    let prod = l1 * l2;
    Ok((lhs - (r * prod - prod * r)).amax())
}

/// Max-abs of `{S₁(z), S₂(w)} − ([r₁₂(z/w), S₁S₂] + S₁ r₁₂(zw) S₂ − S₂ r₁₂(zw) S₁)`.
pub fn reflection_defect(c: &ChainState, z: f64, w: f64) -> Result<f64> {
    check_generic(z, w)?;
    if (z * w).powi(2) == 1.0 {
        return Err(Error::Domain(format!("r(zw) has a pole at zw = ±1 (z = {z}, w = {w})")));
    }
    let x = c.coords();
    let xi = c.xi_minus;
    let lhs = bracket_matrix(c.n_sites(), &x, z, w, move |x, at| monodromy_eval(x, xi, at))?;
    let s1 = kron_left(&monodromy_eval(&x, xi, z));
    let s2 = kron_right(&monodromy_eval(&x, xi, w));
    let (ra, rb) = (r12(z / w)?, r12(z * w)?);
    let prod = s1 * s2;
    let rhs = ra * prod - prod * ra + s1 * rb * s2 - s2 * rb * s1;
    Ok((lhs - rhs).amax())
}

/// The quadratic reflection relation for the constant cleared `K(z; ξ)`.
pub fn k_reflection_defect(xi: f64, z: f64, w: f64) -> Result<f64> {
    let c = ChainState::new(vec![], vec![], 1.0, xi)?;
    reflection_defect(&c, z, w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReflectionDefects {
    /// Max over sites of the single-site Sklyanin defect.
    pub sklyanin: f64,
    pub reflection: f64,
}

pub fn reflection_algebra_check(c: &ChainState, z: f64, w: f64) -> Result<ReflectionDefects> {
    let mut sk: f64 = 0.0;
    for s in &c.sites {
        sk = sk.max(sklyanin_defect(s, z, w)?);
    }
    Ok(ReflectionDefects { sklyanin: sk, reflection: reflection_defect(c, z, w)? })
}

/// Max-abs of `[r₁₂(z), r₁₃(zw)] + [r₁₂(z), r₂₃(w)] + [r₁₃(zw), r₂₃(w)]` on `C²⊗C²⊗C²`.
pub fn cybe_multiplicative_defect(z: f64, w: f64) -> Result<f64> {
    let embed = |r: &Matrix4<f64>, a: usize, b: usize| -> DMatrix<f64> {
        // basis index 4·i₁ + 2·i₂ + i₃
        DMatrix::from_fn(8, 8, |row, col| {
            let ri = [row >> 2, (row >> 1) & 1, row & 1];
            let ci = [col >> 2, (col >> 1) & 1, col & 1];
            let spectator = 3 - a - b;
            if ri[spectator] != ci[spectator] {
                return 0.0;
            }
            r[(2 * ri[a] + ri[b], 2 * ci[a] + ci[b])]
        })
    };
    let c = |x: &DMatrix<f64>, y: &DMatrix<f64>| x * y - y * x;
    let r12m = embed(&r12(z)?, 0, 1);
    let r13m = embed(&r12(z * w)?, 0, 2);
    let r23m = embed(&r12(w)?, 1, 2);
    Ok((c(&r12m, &r13m) + c(&r12m, &r23m) + c(&r13m, &r23m)).amax())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemiclassicalFit {
    pub z: f64,
    /// `(h, ‖f(z)R(z) − I − h·r(z)‖_F)`.
    pub defects: Vec<(f64, f64)>,
    pub slope: f64,
}

/// Six-vertex `f(z)R(z)` at `q = e^h`.
pub fn quantum_r(z: f64, h: f64) -> Result<Matrix4<f64>> {
    let q = h.exp();
    let den = q * z - 1.0 / (q * z);
    let zz = z - 1.0 / z;
    if den == 0.0 || zz == 0.0 || z == 0.0 {
        return Err(Error::Domain(format!("quantum R-matrix has a pole at z = {z}")));
    }
    let b = zz / den;
    let c = (q - 1.0 / q) / den;
    let f = (q.sqrt() * z - 1.0 / (q.sqrt() * z)) / zz;
    Ok(Matrix4::new(1.0, 0.0, 0.0, 0.0, 0.0, b, c, 0.0, 0.0, c, b, 0.0, 0.0, 0.0, 0.0, 1.0) * f)
}

pub fn semiclassical_check(z: f64, h_values: &[f64]) -> Result<SemiclassicalFit> {
    if h_values.len() < 3 {
        return Err(Error::Input("need at least 3 values of h".into()));
    }
    if let Some(h) = h_values.iter().find(|&&h| !(h > 0.0 && h <= 0.1)) {
        return Err(Error::Input(format!("h = {h} outside (0, 0.1]")));
    }
    let r = trig_r_matrix(z, 1.0).map_err(|_| Error::Domain(format!("r(z) has a pole at z = {z}")))?;
    let defects = h_values
        .iter()
        .map(|&h| Ok((h, (quantum_r(z, h)? - Matrix4::identity() - r * h).norm())))
        .collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, f64)> = defects.iter().map(|&(h, d)| (h.ln(), d.ln())).collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Input("h values must not all coincide".into()));
    }
    Ok(SemiclassicalFit { z, defects, slope: sxy / sxx })
}

/// `tr(K₋(z)K₊(z))` in cleared normalization (the `N = 0` transfer value).
pub fn boundary_trace(xi_plus: f64, xi_minus: f64, z: f64) -> f64 {
    let (a, b) = (k_cleared_eval::<f64>(xi_plus, z), k_cleared_eval::<f64>(xi_minus, z));
    a[0][0] * b[0][0] + a[1][1] * b[1][1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kron_layout() {
        let a = [[1.0, 2.0], [3.0, 4.0]];
        let l = kron_left(&a);
        assert_eq!(l[(2, 0)], 3.0);
        assert_eq!(l[(2, 1)], 0.0);
        let r = kron_right(&a);
        assert_eq!(r[(1, 0)], 3.0);
        assert_eq!(r[(2, 0)], 0.0);
    }

    #[test]
    fn cybe_with_multiplicative_parameter() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let z: f64 = rng.random_range(1.2..3.0);
            let w: f64 = rng.random_range(0.2..0.8);
            assert!(cybe_multiplicative_defect(z, w).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn boundary_matrix_solves_reflection_relation() {
        for &(xi, z, w) in &[(2.0, 1.3, 0.7), (-1.5, 0.4, 2.2), (0.8, 1.9, 1.1)] {
            assert!(k_reflection_defect(xi, z, w).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn sklyanin_bracket_single_site() {
        let s = SiteState::new(1.3, 0.4, -0.6).unwrap();
        assert!(sklyanin_defect(&s, 1.7, 0.6).unwrap() <= 1e-10);
        let trivial = SiteState::new(1.0, 0.0, 0.0).unwrap();
        assert!(sklyanin_defect(&trivial, 1.7, 0.6).unwrap() <= 1e-14);
        assert!(matches!(sklyanin_defect(&s, 1.0, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn reflection_algebra_two_sites() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = ChainState::random_on_leaf(2, 1.5, 2.0, 1.6, 0.2, &mut rng).unwrap();
        let d = reflection_algebra_check(&c, 1.4, 0.55).unwrap();
        assert!(d.sklyanin <= 1e-8 && d.reflection <= 1e-8, "{d:?}");
        assert!(matches!(reflection_defect(&c, 2.0, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn semiclassical_slope() {
        let hs = [1e-2, 10f64.powf(-2.5), 1e-3];
        let fit = semiclassical_check(2.0, &hs).unwrap();
        assert!(fit.slope >= 1.9 && fit.slope <= 2.1, "{}", fit.slope);
        let ratios: Vec<f64> = fit.defects.iter().map(|&(h, d)| d / h).collect();
        assert!(ratios.windows(2).all(|w| w[1] < w[0]));
        assert!(semiclassical_check(1.0, &hs).is_err());
        assert!(semiclassical_check(2.0, &hs[..2]).is_err());
    }

    #[test]
    fn quantum_r_at_q_one_is_identity() {
        let r = quantum_r(2.0, 0.0).unwrap();
        assert!((r - Matrix4::identity()).amax() < 1e-15);
    }
}
