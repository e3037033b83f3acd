use nalgebra::Matrix2;

use crate::dual::Real;
use crate::error::{Error, Result};
use crate::poisson::Observable;
use crate::xxz::chain::{
    casimir_value, k_cleared_eval, k_matrix, lax_eval, lax_matrix, leaf_casimir, mul2, trace2, ChainState,
    KNormalization, SiteState, LEAF_TOL, M2,
};
use crate::xxz::laurent::LaurentMatrix;

/// `S(z) = L₁(z)⋯L_N(z) K₋(z) L_N(z)⋯L₁(z)` with cleared `K₋`.
pub fn reflection_monodromy(c: &ChainState) -> Result<LaurentMatrix> {
    let ls = c.sites.iter().map(lax_matrix).collect::<Result<Vec<_>>>()?;
    let mut s = k_matrix(c.xi_minus, KNormalization::Cleared)?.cleared();
    for l in ls.iter().rev() {
        s = l.mul(&s).mul(l);
    }
    Ok(s)
}

/// `S(z)` at a point, over any scalar, from coordinates `(k, e, f)` per site.
pub fn monodromy_eval<S: Real>(x: &[S], xi_minus: f64, z: f64) -> M2<S> {
    let mut s: M2<S> = k_cleared_eval(xi_minus, z);
    for site in x.chunks(3).rev() {
        let l = lax_eval(site[0], site[1], site[2], z);
        s = mul2(&mul2(&l, &s), &l);
    }
    s
}

/// `tr(S(z) K₊(z))` with cleared `K₊`.
pub fn transfer_eval<S: Real>(x: &[S], xi_plus: f64, xi_minus: f64, z: f64) -> S {
    trace2(&mul2(&monodromy_eval(x, xi_minus, z), &k_cleared_eval(xi_plus, z)))
}

fn check_z(z: f64) -> Result<()> {
    if z == 0.0 || !z.is_finite() {
        return Err(Error::Domain(format!("spectral parameter z = {z} must be finite and nonzero")));
    }
    Ok(())
}

pub fn transfer_value(c: &ChainState, z: f64) -> Result<f64> {
    check_z(z)?;
    Ok(transfer_eval(&c.coords(), c.xi_plus, c.xi_minus, z))
}

/// `τ(z)` as an observable on chain coordinates.
pub fn transfer_observable(xi_plus: f64, xi_minus: f64, z: f64) -> Result<Observable> {
    check_z(z)?;
    Ok(Observable::new(format!("tau_{z}"), move |x| transfer_eval(x, xi_plus, xi_minus, z)))
}

/// `ω_n` (0-based site index) as an observable.
pub fn casimir_observable(site: usize) -> Observable {
    Observable::new(format!("omega_{}", site + 1), move |x| casimir_value(x[3 * site], x[3 * site + 1], x[3 * site + 2]))
}

/// Unregularized `T(z) = L₁(z)⋯K₋(z)L_N⁻¹(z⁻¹)⋯L₁⁻¹(z⁻¹)` with Sklyanin `K₋`,
/// formed pointwise with explicit inverses (for cross-checks only).
pub fn unregularized_monodromy(c: &ChainState, z: f64) -> Result<M2<f64>> {
    check_z(z)?;
    let k = k_matrix(c.xi_minus, KNormalization::Sklyanin)?.eval(z)?;
    let to_na = |m: &M2<f64>| Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1]);
    let mut left = Matrix2::<f64>::identity();
    let mut right = Matrix2::<f64>::identity();
    for s in &c.sites {
        left *= to_na(&lax_eval(s.k, s.e, s.f, z));
        let inv = to_na(&lax_eval(s.k, s.e, s.f, 1.0 / z))
            .try_inverse()
            .ok_or_else(|| Error::Pole(format!("L(z⁻¹) is singular at z = {z}")))?;
        right = inv * right;
    }
    let t = left * to_na(&k) * right;
    Ok([[t[(0, 0)], t[(0, 1)]], [t[(1, 0)], t[(1, 1)]]])
}

/// `det S(z)` at a point.
pub fn monodromy_det(c: &ChainState, z: f64) -> Result<f64> {
    check_z(z)?;
    let s = monodromy_eval(&c.coords(), c.xi_minus, z);
    Ok(s[0][0] * s[1][1] - s[0][1] * s[1][0])
}

/// Rank-one factors `L(t) = α βᵀ` on the leaf `ω = t² + t⁻²`.
pub fn projector_degeneration(s: &SiteState, t: f64) -> Result<([f64; 2], [f64; 2])> {
    let (w, want) = (s.casimir(), leaf_casimir(t));
    if !((w - want).abs() <= LEAF_TOL) {
        return Err(Error::LeafMismatch { casimir: w, expected: want });
    }
    if s.e == 0.0 {
        return Err(Error::DegenerateParameterization("e = 0".into()));
    }
    let (k, ti) = (s.k, 1.0 / t);
    let alpha = [1.0, (t / k - ti * k) / s.e];
    let beta = [t * k - ti / k, s.e];
    Ok((alpha, beta))
}

/// Log arguments of the local Hamiltonian, labelled `H_0`, `H_{n,n+1}`, `H_N`.
pub fn local_terms<S: Real>(x: &[S], t: f64, xi_plus: f64, xi_minus: f64) -> Vec<(String, S)> {
    let n = x.len() / 3;
    let omega = leaf_casimir(t);
    let site = |i: usize| (x[3 * i], x[3 * i + 1], x[3 * i + 2]);
    let mut out = Vec::with_capacity(n + 1);
    if n == 0 {
        return out;
    }
    let (k1, _, _) = site(0);
    out.push(("H_0".to_string(), k1 * xi_plus - k1.recip() * (1.0 / xi_plus)));
    for i in 0..n - 1 {
        let (ka, ea, fa) = site(i);
        let (kb, eb, fb) = site(i + 1);
        let arg = ea * fb + eb * fa + (ka * kb + (ka * kb).recip()) * omega - (ka / kb + kb / ka) * 2.0;
        out.push((format!("H_{{{},{}}}", i + 1, i + 2), arg));
    }
    let (kn, _, _) = site(n - 1);
    out.push((format!("H_{n}"), kn * xi_minus - kn.recip() * (1.0 / xi_minus)));
    out
}

/// `H = H_0 + Σ H_{n,n+1} + H_N` on a homogeneous chain.
pub fn local_hamiltonian(c: &ChainState) -> Result<f64> {
    let t = c.homogeneous_t()?;
    let mut h = 0.0;
    for (name, arg) in local_terms(&c.coords(), t, c.xi_plus, c.xi_minus) {
        if !(arg > 0.0) {
            return Err(Error::Domain(format!("log argument of {name} is {arg:e}")));
        }
        h += arg.ln();
    }
    Ok(h)
}

/// The local Hamiltonian as an observable (NaN outside the log domain).
pub fn local_hamiltonian_observable(t: f64, xi_plus: f64, xi_minus: f64) -> Observable {
    Observable::new("H_local", move |x| {
        local_terms(x, t, xi_plus, xi_minus).into_iter().fold(Real::zero(), |acc, (_, a)| acc + a.ln())
    })
}

/// `exp(H) / tr(S(t)K₊(t))`, state independent on a homogeneous leaf.
pub fn product_formula_ratio(c: &ChainState) -> Result<f64> {
    let t = c.homogeneous_t()?;
    let h = local_hamiltonian(c)?;
    let tau = transfer_value(c, t)?;
    if tau == 0.0 {
        return Err(Error::Domain("tr(S(t)K₊(t)) vanishes".into()));
    }
    Ok(h.exp() / tau)
}

/// `tr(L_a(z) L_b(z))` for two sites.
pub fn pair_trace(a: &SiteState, b: &SiteState, z: f64) -> f64 {
    trace2(&mul2(&lax_eval(a.k, a.e, a.f, z), &lax_eval(b.k, b.e, b.f, z)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xxz::laurent::LaurentPoly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn chain(n: usize, seed: u64) -> ChainState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ChainState::random_on_leaf(n, 1.5, 2.0, 1.6, 0.2, &mut rng).unwrap()
    }

    #[test]
    fn laurent_unitarity_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let s = SiteState::new(rng.random_range(0.2..2.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)).unwrap();
            let l = lax_matrix(&s).unwrap();
            let lhs = l.mul(&l.invert_variable());
            let scalar = LaurentPoly::from_terms([(0, s.casimir()), (2, -1.0), (-2, -1.0)]);
            assert!(lhs.sub(&LaurentMatrix::scalar(scalar)).max_abs_coeff() <= 1e-13);
        }
    }

    #[test]
    fn empty_chain_is_k_minus() {
        let c = ChainState::new(vec![], vec![], 2.0, 1.5).unwrap();
        let s = reflection_monodromy(&c).unwrap();
        assert_eq!(s, k_matrix(1.5, KNormalization::Cleared).unwrap().cleared());
        let z = 1.3;
        let kp = k_matrix(2.0, KNormalization::Cleared).unwrap().eval(z).unwrap();
        let km = k_matrix(1.5, KNormalization::Cleared).unwrap().eval(z).unwrap();
        assert!((transfer_value(&c, z).unwrap() - (kp[0][0] * km[0][0] + kp[1][1] * km[1][1])).abs() < 1e-14);
    }

    #[test]
    fn single_site_triple_product() {
        let c = chain(1, 2);
        let s = reflection_monodromy(&c).unwrap();
        assert!(s.degree_range().is_some_and(|(lo, hi)| lo >= -3 && hi <= 3));
        for &z in &[0.7, 1.3, 2.9] {
            let l = lax_eval(c.sites[0].k, c.sites[0].e, c.sites[0].f, z);
            let k = k_cleared_eval::<f64>(c.xi_minus, z);
            let want = mul2(&mul2(&l, &k), &l);
            let got = s.eval(z).unwrap();
            let pointwise = monodromy_eval(&c.coords(), c.xi_minus, z);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((got[i][j] - want[i][j]).abs() < 1e-12 * (1.0 + want[i][j].abs()));
                    assert!((pointwise[i][j] - want[i][j]).abs() < 1e-12 * (1.0 + want[i][j].abs()));
                }
            }
        }
    }

    #[test]
    fn regularized_and_unregularized_agree_up_to_scalar() {
        let c = chain(3, 3);
        for &z in &[0.6, 1.1, 2.3] {
            let s = monodromy_eval(&c.coords(), c.xi_minus, z);
            let t = unregularized_monodromy(&c, z).unwrap();
            let scalar: f64 = c.sites.iter().map(|s| s.casimir() - z * z - 1.0 / (z * z)).product::<f64>()
                * (c.xi_minus * z - 1.0 / (c.xi_minus * z));
            for i in 0..2 {
                for j in 0..2 {
                    assert!((s[i][j] - scalar * t[i][j]).abs() <= 1e-10 * (1.0 + s[i][j].abs()));
                }
            }
        }
    }

    #[test]
    fn det_is_constant_on_leaf() {
        let (a, b) = (chain(2, 10), chain(2, 11));
        for &z in &[0.5, 1.2, 2.0] {
            let (da, db) = (monodromy_det(&a, z).unwrap(), monodromy_det(&b, z).unwrap());
            assert!((da - db).abs() <= 1e-10 * da.abs().max(1.0));
        }
    }

    #[test]
    fn degeneration_rank_one() {
        let t = 1.5;
        for seed in 0..10 {
            let c = chain(1, 100 + seed);
            let s = c.sites[0];
            let (al, be) = projector_degeneration(&s, t).unwrap();
            let l = lax_eval(s.k, s.e, s.f, t);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((l[i][j] - al[i] * be[j]).abs() <= 1e-10);
                }
            }
            let m = Matrix2::new(l[0][0], l[0][1], l[1][0], l[1][1]);
            let sv = m.singular_values();
            assert!(sv.min() <= 1e-10 * sv.max());
        }
        let off = SiteState::new(1.0, 0.5, 0.5).unwrap();
        assert!(matches!(projector_degeneration(&off, 1.5), Err(Error::LeafMismatch { .. })));
        let no_e = SiteState::new(1.5, 0.0, 0.0).unwrap();
        let t = 1.5;
        assert!(matches!(projector_degeneration(&no_e, t), Err(Error::DegenerateParameterization(_))));
    }

    #[test]
    fn pair_trace_matches_hamiltonian_argument() {
        let t = 1.5;
        let c = chain(2, 7);
        let terms = local_terms(&c.coords(), t, c.xi_plus, c.xi_minus);
        let direct = pair_trace(&c.sites[0], &c.sites[1], t);
        assert!((terms[1].1 - direct).abs() < 1e-12 * direct.abs());
    }

    #[test]
    fn boundary_overlap_constant() {
        let t = 1.5;
        let c = chain(1, 8);
        let s = c.sites[0];
        let (al, be) = projector_degeneration(&s, t).unwrap();
        for xi in [c.xi_plus, c.xi_minus] {
            let k = k_cleared_eval::<f64>(xi, t);
            let overlap = k[0][0] * al[0] * be[0] + k[1][1] * al[1] * be[1];
            let want = (t * t - 1.0 / (t * t)) * (xi * s.k - 1.0 / (xi * s.k));
            assert!((overlap - want).abs() < 1e-12 * want.abs());
        }
    }

    #[test]
    fn product_formula_constant() {
        let t = 1.5;
        let want = 1.0 / (t * t - 1.0 / (t * t)).powi(2);
        for n in 1..=3 {
            for seed in 0..5 {
                let r = product_formula_ratio(&chain(n, 1000 + seed)).unwrap();
                assert!((r - want).abs() < 1e-10 * want, "n={n}: {r} vs {want}");
            }
        }
    }

    #[test]
    fn log_domain_error_names_term() {
        let s = SiteState::on_leaf(1.5, 0.5, 1.5).unwrap();
        let c = ChainState::new(vec![s], vec![1.5], 0.5, 2.0).unwrap();
        match local_hamiltonian(&c) {
            Err(Error::Domain(msg)) => assert!(msg.contains("H_0")),
            other => panic!("{other:?}"),
        }
    }
}
