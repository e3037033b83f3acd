use cre_core::poisson::{integrate_flow, StepControl};
use cre_core::toda::{
    build_monodromy, calibrate_kappa, factorization_solve, reflection_hamiltonian, spectral_invariants, TodaChart,
};

fn direct(chart: &TodaChart, m: u32, t: f64) -> nalgebra::DMatrix<f64> {
    let h = reflection_hamiltonian(chart.n, m).unwrap();
    let tr = integrate_flow(&chart.structure(), &h, &chart.to_state(), t, StepControl::adaptive(t / 20.0, 1e-11), &[]).unwrap();
    build_monodromy(&TodaChart::from_state(chart.n, tr.last_state()).unwrap()).to_matrix()
}

#[test]
fn fitted_kappa() {
    let cal = calibrate_kappa(2, 20, 5).unwrap();
    assert!((cal.kappa + 2.0).abs() < 1e-10, "kappa = {}", cal.kappa);
}

#[test]
fn factorization_matches_direct_integration() {
    let kappa = calibrate_kappa(2, 20, 5).unwrap().kappa;
    for n in 1..=4 {
        let chart = TodaChart::random_seeded(n, 0.5, 70 + n as u64).unwrap();
        let t0 = build_monodromy(&chart).to_matrix();
        for m in 1..=2u32 {
            for &t in &[0.1, 0.5, 1.0] {
                let f = factorization_solve(&t0, m, t, kappa).unwrap();
                let d = direct(&chart, m, t);
                let err = (&f - &d).amax();
                assert!(err <= 1e-6, "n={n} m={m} t={t}: {err:e}");
            }
        }
    }
}

#[test]
fn direct_flow_is_isospectral() {
    let chart = TodaChart::random_seeded(2, 0.5, 3).unwrap();
    let e0 = spectral_invariants(&build_monodromy(&chart).to_matrix()).unwrap().eigenvalues;
    let e1 = spectral_invariants(&direct(&chart, 1, 10.0)).unwrap().eigenvalues;
    for (a, b) in e0.iter().zip(&e1) {
        assert!((a - b).abs() <= 1e-8);
    }
}
