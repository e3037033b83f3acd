use nalgebra::DMatrix;
use proptest::prelude::*;

use cre_core::lie::presets::{algebra, automorphism};
use cre_core::lie::{cre_defect, TensorElement};
use cre_core::Real;
use cre_core::poisson::{
    antisymmetry_defect, jacobi_defect, poisson_bracket, CanonicalStructure, Observable, PhaseSpaceState,
    PoissonStructure, XxzStructure,
};
use cre_core::toda::{build_monodromy, iwasawa_factor, lax_generator, TodaChart};
use cre_core::xxz::{
    casimir_observable, lax_matrix, transfer_observable, ChainState, LaurentMatrix, LaurentPoly, SiteState,
};

/// `a·x + b·exp(c·x_j) + d·x_k·x_l`.
#[derive(Debug, Clone)]
struct Recipe {
    a: Vec<f64>,
    b: f64,
    c: f64,
    d: f64,
    j: usize,
    k: usize,
    l: usize,
}

fn recipe(dim: usize) -> impl Strategy<Value = Recipe> {
    (
        prop::collection::vec(-1.0..1.0f64, dim),
        -1.0..1.0f64,
        -1.0..1.0f64,
        -1.0..1.0f64,
        0..dim,
        0..dim,
        0..dim,
    )
        .prop_map(|(a, b, c, d, j, k, l)| Recipe { a, b, c, d, j, k, l })
}

fn observable(s: &Recipe) -> Observable {
    let s = s.clone();
    Observable::new("F", move |x| {
        let mut acc = x[s.k] * x[s.l] * s.d + (x[s.j] * s.c).exp() * s.b;
        for (xi, ai) in x.iter().zip(&s.a) {
            acc += *xi * *ai;
        }
        acc
    })
}

fn state(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, dim)
}

fn xxz_state(sites: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0.3..2.0f64, -1.0..1.0f64, -1.0..1.0f64), sites)
        .prop_map(|v| v.into_iter().flat_map(|(k, e, f)| [k, e, f]).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_exactly_antisymmetric(f in recipe(6), g in recipe(6), x in xxz_state(2)) {
        let ps = XxzStructure::new(2);
        let s = PhaseSpaceState::new(x);
        let (f, g) = (observable(&f), observable(&g));
        let fg = poisson_bracket(&ps, &f, &g, &s).unwrap();
        let gf = poisson_bracket(&ps, &g, &f, &s).unwrap();
        prop_assert_eq!(fg, -gf);
    }

    #[test]
    fn leibniz_rule(f in recipe(4), g in recipe(4), h in recipe(4), x in state(4)) {
        let ps = CanonicalStructure::new(2);
        let s = PhaseSpaceState::new(x);
        let (f, g, h) = (observable(&f), observable(&g), observable(&h));
        let fg = Observable::product(&f, &g);
        let lhs = poisson_bracket(&ps, &fg, &h, &s).unwrap();
        let rhs = f.eval(&s.coords) * poisson_bracket(&ps, &g, &h, &s).unwrap()
            + g.eval(&s.coords) * poisson_bracket(&ps, &f, &h, &s).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn xxz_structure_is_poisson(x in xxz_state(3)) {
        let ps = XxzStructure::new(3);
        prop_assert_eq!(antisymmetry_defect(&ps, &x), 0.0);
        prop_assert!(jacobi_defect(&ps, &x) <= 1e-9);
    }

    #[test]
    fn coordinate_double_brackets_satisfy_jacobi(x in xxz_state(2), i in 0..6usize, j in 0..6usize, k in 0..6usize) {
        let ps = XxzStructure::new(2);
        let s = PhaseSpaceState::new(x);
        let coord = |a: usize| Observable::coordinate("x", a);
        // {x_a, x_b} = Π^{ab} as an observable
        let pi = |a: usize, b: usize| Observable::new("pi", move |y| ps.tensor(y)[a * 6 + b]);
        let cyc = poisson_bracket(&ps, &coord(i), &pi(j, k), &s).unwrap()
            + poisson_bracket(&ps, &coord(j), &pi(k, i), &s).unwrap()
            + poisson_bracket(&ps, &coord(k), &pi(i, j), &s).unwrap();
        prop_assert!(cyc.abs() <= 1e-9, "{cyc}");
    }

    #[test]
    fn dual_gradient_matches_central_differences(f in recipe(4), x in state(4)) {
        let f = observable(&f);
        let grad = f.gradient(&x).unwrap();
        let h = 1e-6;
        for i in 0..4 {
            let mut up = x.clone();
            let mut dn = x.clone();
            up[i] += h;
            dn[i] -= h;
            let fd = (f.eval(&up) - f.eval(&dn)) / (2.0 * h);
            prop_assert!((fd - grad[i]).abs() <= 1e-6 * grad[i].abs().max(1.0), "{fd} vs {}", grad[i]);
        }
    }

    #[test]
    fn casimirs_are_central(x in xxz_state(2), site in 0..2usize, coord in 0..6usize) {
        let ps = XxzStructure::new(2);
        let s = PhaseSpaceState::new(x);
        let b = poisson_bracket(&ps, &casimir_observable(site), &Observable::coordinate("x", coord), &s).unwrap();
        prop_assert!(b.abs() <= 1e-12, "{b}");
    }

    #[test]
    fn monodromy_is_spd_with_unit_det(n in 1..=8usize, seed in any::<u64>()) {
        let t = build_monodromy(&TodaChart::random_seeded(n, 1.0, seed).unwrap()).to_matrix();
        prop_assert_eq!(&t, &t.transpose());
        prop_assert!(t.clone().cholesky().is_some());
        prop_assert!((t.determinant() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn lax_generator_is_antisymmetric(n in 1..=5usize, m in 1..=3u32, seed in any::<u64>()) {
        let t = build_monodromy(&TodaChart::random_seeded(n, 0.5, seed).unwrap()).to_matrix();
        let a = lax_generator(&t, m, -2.0);
        prop_assert_eq!(&a, &(-a.transpose()));
    }

    #[test]
    fn iwasawa_reconstructs(n in 1..=5usize, entries in prop::collection::vec(-1.0..1.0f64, 25)) {
        let mut m = DMatrix::from_fn(n, n, |i, j| entries[i * 5 + j]) + DMatrix::identity(n, n) * 3.0;
        if m.determinant() < 0.0 {
            m.row_mut(0).neg_mut();
        }
        let (b, k) = iwasawa_factor(&m).unwrap();
        prop_assert!((&b * &k - &m).amax() <= 1e-12);
        prop_assert!((&k * k.transpose() - DMatrix::identity(n, n)).amax() <= 1e-12);
        for i in 0..n {
            prop_assert!(b[(i, i)] > 0.0);
            for j in 0..i {
                prop_assert_eq!(b[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn laurent_unitarity(k in 0.2..3.0f64, e in -2.0..2.0f64, f in -2.0..2.0f64) {
        let s = SiteState::new(k, e, f).unwrap();
        let l = lax_matrix(&s).unwrap();
        let scalar = LaurentPoly::from_terms([(0, s.casimir()), (2, -1.0), (-2, -1.0)]);
        prop_assert!(l.mul(&l.invert_variable()).sub(&LaurentMatrix::scalar(scalar)).max_abs_coeff() <= 1e-13);
    }

    #[test]
    fn transfer_matrices_commute(n in 1..=3usize, seed in any::<u64>(), z in 0.6..1.6f64, w in 0.6..1.6f64) {
        prop_assume!((z - w).abs() > 0.1 && (z * w - 1.0).abs() > 0.1);
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let c = ChainState::random_on_leaf(n, 1.4, 1.7, 1.3, 0.3, &mut rng).unwrap();
        let ps = XxzStructure::new(n);
        let tz = transfer_observable(c.xi_plus, c.xi_minus, z).unwrap();
        let tw = transfer_observable(c.xi_plus, c.xi_minus, w).unwrap();
        let b = poisson_bracket(&ps, &tz, &tw, &PhaseSpaceState::new(c.coords())).unwrap();
        prop_assert!(b.abs() <= 1e-8, "{b}");
    }

    #[test]
    fn cre_defect_vanishes_for_identity(coeffs in prop::collection::vec(-1.0..1.0f64, 64)) {
        let g = algebra("sl3").unwrap();
        let id = automorphism(&g, "identity").unwrap();
        let r = TensorElement::from_coeffs(8, 2, coeffs).unwrap();
        prop_assert_eq!(cre_defect(&g, &r, &id).unwrap().norm(), 0.0);
    }

    #[test]
    fn cre_defect_is_linear(a in prop::collection::vec(-1.0..1.0f64, 64), b in prop::collection::vec(-1.0..1.0f64, 64), s in -2.0..2.0f64) {
        let g = algebra("sl3").unwrap();
        let sigma = automorphism(&g, "diagram").unwrap();
        let ra = TensorElement::from_coeffs(8, 2, a).unwrap();
        let rb = TensorElement::from_coeffs(8, 2, b).unwrap();
        let lhs = cre_defect(&g, &ra.scaled(s).plus(&rb), &sigma).unwrap();
        let rhs = cre_defect(&g, &ra, &sigma).unwrap().scaled(s).plus(&cre_defect(&g, &rb, &sigma).unwrap());
        prop_assert!(lhs.minus(&rhs).norm() <= 1e-12);
    }
}

