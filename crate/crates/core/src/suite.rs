//! The property checks behind the acceptance criteria, one runner per
//! criterion. Each runner draws all randomness from its seed and returns named
//! defects together with the tolerance they are judged against.

use nalgebra::DMatrix;
use num::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::lie::decomposition::{blocks_from, fixed_subalgebra};
use crate::lie::exact::{cre_defect_exact, standard_r_exact, ExactAlgebra, ExactMatrix};
use crate::lie::presets::{algebra, automorphism, cartan_involution, skew_r_matrix, standard_r_matrix};
use crate::lie::{cre_defect, cybe_defect, mcybe_defect, sl, TensorElement};
use crate::poisson::{
    commutation_report, independence_rank, integrate_flow, poisson_bracket, sample_states, StepControl, XxzStructure,
};
use crate::toda::{
    build_monodromy, calibrate_kappa, factorization_solve, reflection_hamiltonian, spectral_invariants, TodaChart,
};
use crate::xxz::{
    lax_matrix, local_hamiltonian_observable, product_formula_ratio, reflection_algebra_check, semiclassical_check,
    evolve_chain, transfer_observable, ChainState, LaurentMatrix, LaurentPoly, SiteState, DEFAULT_LEAF_T,
    DEFAULT_SPREAD, DEFAULT_XI,
};

/// One named defect and the tolerance it must not exceed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, defect: f64, tolerance: f64) -> Self {
        Check { name: name.into(), defect, tolerance, pass: defect <= tolerance }
    }

    /// Re-judge against a different tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.defect <= tolerance;
        self
    }
}

pub type Runner = fn(u64) -> Result<Vec<Check>>;

#[derive(Debug, Clone, Copy)]
pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    /// Wall-clock budget in seconds.
    pub time_limit: f64,
    pub run: Runner,
}

pub const CRITERIA: &[Criterion] = &[
    Criterion { id: "ac01", title: "reflection equation for the Cartan involution", time_limit: 1.0, run: ac01_cre },
    Criterion { id: "ac02", title: "classical and modified Yang-Baxter equations", time_limit: 1.0, run: ac02_cybe },
    Criterion { id: "ac03", title: "coideal equivalence on random r", time_limit: 5.0, run: ac03_coideal },
    Criterion { id: "ac04", title: "Toda commutativity and independence", time_limit: 10.0, run: ac04_toda_commutation },
    Criterion { id: "ac05", title: "factorization against direct integration", time_limit: 30.0, run: ac05_factorization },
    Criterion { id: "ac06", title: "isospectrality of the Toda flow", time_limit: 30.0, run: ac06_isospectral },
    Criterion { id: "ac07", title: "Laurent unitarity of the Lax matrix", time_limit: 1.0, run: ac07_laurent },
    Criterion { id: "ac08", title: "Sklyanin bracket and reflection algebra", time_limit: 60.0, run: ac08_reflection },
    Criterion { id: "ac09", title: "commuting transfer matrices", time_limit: 60.0, run: ac09_transfer },
    Criterion { id: "ac10", title: "local Hamiltonian and its flow", time_limit: 120.0, run: ac10_local_hamiltonian },
    Criterion { id: "ac11", title: "semiclassical limit of the six-vertex R-matrix", time_limit: 1.0, run: ac11_semiclassical },
];

pub fn criterion(id: &str) -> Option<&'static Criterion> {
    CRITERIA.iter().find(|c| c.id == id)
}

fn rational_max_abs(m: &ExactMatrix) -> f64 {
    m.entries().iter().map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
}

fn random_vec(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn ac01_cre(_seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for size in 2..=5 {
        let g = sl(size)?;
        let r = skew_r_matrix(&g)?;
        let theta = cartan_involution(&g)?;
        out.push(Check::new(format!("cre_defect_sl{size}"), cre_defect(&g, &r, &theta)?.norm(), 1e-12));
        let exact = cre_defect_exact(&ExactMatrix::from_tensor(&r)?, &ExactMatrix::from_automorphism(&theta)?);
        out.push(Check::new(format!("cre_defect_exact_sl{size}"), rational_max_abs(&exact), 0.0));
    }
    Ok(out)
}

pub fn ac02_cybe(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for size in 2..=3 {
        let g = sl(size)?;
        let r = standard_r_matrix(&g)?;
        out.push(Check::new(format!("cybe_defect_sl{size}"), cybe_defect(&g, &r)?.norm(), 1e-12));
        let ex = ExactAlgebra::from_algebra(&g)?;
        let rx = standard_r_exact(&g, &skew_r_matrix(&g)?)?;
        let exact = ex.cybe_defect(&rx).iter().map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
        out.push(Check::new(format!("cybe_defect_exact_sl{size}"), exact, 0.0));
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let x = random_vec(&mut rng, g.dim());
            let y = random_vec(&mut rng, g.dim());
            worst = worst.max(max_abs(&mcybe_defect(&g, &r, &x, &y)?));
        }
        out.push(Check::new(format!("mcybe_defect_sl{size}"), worst, 1e-10));
    }
    Ok(out)
}

/// Finite-order automorphisms used for the coideal equivalence.
const COIDEAL_CASES: &[(&str, &str)] =
    &[("sl2", "cartan"), ("sl3", "cartan"), ("sl3", "diagram"), ("sl3", "cyclic3"), ("sl2+sl2", "swap"), ("sl4", "cartan")];

/// Half of the random tensors have their `p⊗p` block removed so both sides of
/// the equivalence are exercised.
pub fn ac03_coideal(seed: u64) -> Result<Vec<Check>> {
    const TOL: f64 = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = COIDEAL_CASES
        .iter()
        .map(|&(a, s)| {
            let g = algebra(a)?;
            let sigma = automorphism(&g, s)?;
            let dec = fixed_subalgebra(&g, &sigma)?;
            Ok((g, sigma, dec))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut disagreements = 0usize;
    let mut zero_cases = 0usize;
    let mut worst_zero: f64 = 0.0;
    for i in 0..200 {
        let (g, sigma, dec) = &cases[i % cases.len()];
        let d = g.dim();
        let mut r = TensorElement::from_coeffs(d, 2, random_vec(&mut rng, d * d))?;
        if i % 2 == 0 {
            r = r.minus(&blocks_from(dec, &r)?.pp);
        }
        let c = cre_defect(g, &r, sigma)?.norm();
        let pp = blocks_from(dec, &r)?.pp_norm();
        if (c <= TOL) != (pp <= TOL) {
            disagreements += 1;
        }
        if pp <= TOL {
            zero_cases += 1;
            worst_zero = worst_zero.max(c);
        }
    }
    Ok(vec![
        Check::new("coideal_disagreements", disagreements as f64, 0.0),
        Check::new("coideal_missing_zero_cases", if zero_cases == 100 { 0.0 } else { 1.0 }, 0.0),
        Check::new("cre_defect_when_pp_vanishes", worst_zero, TOL),
    ])
}

/// Samples lie in the box `[-0.3, 0.3]^8`: the bracket of `tr T^j` and `tr T^k`
/// carries a rounding floor of order `ε·|∇tr T^j|·|∇tr T^k|`, which outgrows an
/// absolute `1e-9` further out.
pub fn ac04_toda_commutation(seed: u64) -> Result<Vec<Check>> {
    let n = 4;
    let chart = TodaChart::origin(n)?;
    let ps = chart.structure();
    let traces = (1..=n as u32).map(|m| reflection_hamiltonian(n, m)).collect::<Result<Vec<_>>>()?;
    let samples = sample_states(&ps, &chart.to_state().coords, 0.3, 50, seed)?;
    let report = commutation_report(&ps, &traces, &samples)?;
    let mut rank_defect = 0usize;
    for s in samples.iter().take(10) {
        rank_defect = rank_defect.max(n.abs_diff(independence_rank(&ps, &traces, s)?));
    }
    Ok(vec![
        Check::new("toda_commutation_n4", report.max_off_diagonal(), 1e-9),
        Check::new("toda_rank_defect_n4", rank_defect as f64, 0.0),
    ])
}

fn direct_toda(chart: &TodaChart, m: u32, t: f64) -> Result<DMatrix<f64>> {
    let h = reflection_hamiltonian(chart.n, m)?;
    let tr = integrate_flow(&chart.structure(), &h, &chart.to_state(), t, StepControl::adaptive(t / 20.0, 1e-11), &[])?;
    Ok(build_monodromy(&TodaChart::from_state(chart.n, tr.last_state())?).to_matrix())
}

pub fn ac05_factorization(seed: u64) -> Result<Vec<Check>> {
    let cals = (1..=4).map(|n| calibrate_kappa(n, 20, seed.wrapping_add(n as u64))).collect::<Result<Vec<_>>>()?;
    let residual = cals.iter().map(|c| c.residual).fold(0.0, f64::max);
    let kappa = cals[0].kappa;
    let spread = cals.iter().map(|c| (c.kappa - kappa).abs()).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        let chart = TodaChart::random(n, 0.5, &mut rng)?;
        let t0 = build_monodromy(&chart).to_matrix();
        for m in 1..=2 {
            for &t in &[0.1, 0.5, 1.0] {
                let f = factorization_solve(&t0, m, t, kappa)?;
                worst = worst.max((f - direct_toda(&chart, m, t)?).amax());
            }
        }
    }
    Ok(vec![
        Check::new("kappa_residual", residual, 1e-8),
        Check::new("kappa_spread_across_n", spread, 1e-8),
        Check::new("factorization_vs_rk4", worst, 1e-6),
    ])
}

fn eigen_drift(reference: &[f64], t: &DMatrix<f64>) -> Result<f64> {
    let e = spectral_invariants(t)?.eigenvalues;
    Ok(reference.iter().zip(&e).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

pub fn ac06_isospectral(seed: u64) -> Result<Vec<Check>> {
    let n = 3;
    let kappa = calibrate_kappa(n, 20, seed)?.kappa;
    let chart = TodaChart::random_seeded(n, 0.5, seed)?;
    let t0 = build_monodromy(&chart).to_matrix();
    let e0 = spectral_invariants(&t0)?.eigenvalues;
    let mut fact: f64 = 0.0;
    for i in 1..=20 {
        let t = 0.5 * i as f64;
        fact = fact.max(eigen_drift(&e0, &factorization_solve(&t0, 1, t, kappa)?)?);
    }
    let h = reflection_hamiltonian(n, 1)?;
    let tr = integrate_flow(&chart.structure(), &h, &chart.to_state(), 10.0, StepControl::adaptive(0.05, 1e-11), &[])?;
    let mut rk: f64 = 0.0;
    for s in &tr.states {
        rk = rk.max(eigen_drift(&e0, &build_monodromy(&TodaChart::from_state(n, s)?).to_matrix())?);
    }
    Ok(vec![Check::new("isospectral_factorization", fact, 1e-12), Check::new("isospectral_rk4", rk, 1e-8)])
}

pub fn ac07_laurent(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let s = SiteState::new(rng.random_range(0.2..3.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))?;
        let l = lax_matrix(&s)?;
        let scalar = LaurentPoly::from_terms([(0, s.casimir()), (2, -1.0), (-2, -1.0)]);
        worst = worst.max(l.mul(&l.invert_variable()).sub(&LaurentMatrix::scalar(scalar)).max_abs_coeff());
    }
    Ok(vec![Check::new("laurent_unitarity", worst, 1e-13)])
}

/// Spectral parameters in `[0.6, 1.6]` kept away from the poles `z² = w²` and `(zw)² = 1`.
fn generic_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let z: f64 = rng.random_range(0.6..1.6);
        let w: f64 = rng.random_range(0.6..1.6);
        if (z - w).abs() > 0.1 && (z * w - 1.0).abs() > 0.1 {
            return (z, w);
        }
    }
}

fn random_chain(n: usize, rng: &mut ChaCha8Rng) -> Result<ChainState> {
    let t = rng.random_range(1.1..1.6);
    let xi_plus = rng.random_range(1.1..2.0);
    let xi_minus = rng.random_range(1.1..2.0);
    ChainState::random_on_leaf(n, t, xi_plus, xi_minus, 0.3, rng)
}

pub fn ac08_reflection(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sk, mut refl): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let c = random_chain(2, &mut rng)?;
        let (z, w) = generic_pair(&mut rng);
        let d = reflection_algebra_check(&c, z, w)?;
        sk = sk.max(d.sklyanin);
        refl = refl.max(d.reflection);
    }
    Ok(vec![Check::new("sklyanin_defect", sk, 1e-8), Check::new("reflection_defect_n2", refl, 1e-8)])
}

pub fn ac09_transfer(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ps = XxzStructure::new(3);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let c = random_chain(3, &mut rng)?;
        let (z, w) = generic_pair(&mut rng);
        let tz = transfer_observable(c.xi_plus, c.xi_minus, z)?;
        let tw = transfer_observable(c.xi_plus, c.xi_minus, w)?;
        let s = crate::poisson::PhaseSpaceState::new(c.coords());
        worst = worst.max(poisson_bracket(&ps, &tz, &tw, &s)?.abs());
    }
    Ok(vec![Check::new("transfer_commutation_n3", worst, 1e-8)])
}

/// Tuning for the local-Hamiltonian flow check.
pub const AC10_DT: f64 = 0.002;
pub const AC10_T_FINAL: f64 = 5.0;
pub const AC10_TAU_POINTS: [f64; 3] = [0.7, 1.3, 1.9];

pub fn ac10_local_hamiltonian(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ratios = (0..100)
        .map(|_| {
            let c = ChainState::random_on_leaf(3, DEFAULT_LEAF_T, DEFAULT_XI, DEFAULT_XI, 0.2, &mut rng)?;
            product_formula_ratio(&c)
        })
        .collect::<Result<Vec<_>>>()?;
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let c = ChainState::random_on_leaf(3, DEFAULT_LEAF_T, DEFAULT_XI, DEFAULT_XI, DEFAULT_SPREAD, &mut rng)?;
    let h = local_hamiltonian_observable(DEFAULT_LEAF_T, c.xi_plus, c.xi_minus);
    let ev = evolve_chain(&c, &h, AC10_T_FINAL, StepControl::fixed(AC10_DT), &AC10_TAU_POINTS)?;
    let drifts = ev.drifts();
    let (omega, tau) = drifts.split_at(c.n_sites());
    Ok(vec![
        Check::new("product_formula_spread", (hi - lo) / mean.abs(), 1e-9),
        Check::new("log_domain_exits", ev.log_domain_exits.len() as f64, 0.0),
        Check::new("omega_drift", omega.iter().copied().fold(0.0, f64::max), 1e-8),
        Check::new("tau_drift", tau.iter().copied().fold(0.0, f64::max), 1e-6),
    ])
}

pub fn ac11_semiclassical(_seed: u64) -> Result<Vec<Check>> {
    let fit = semiclassical_check(2.0, &[1e-2, 10f64.powf(-2.5), 1e-3])?;
    Ok(vec![Check::new("semiclassical_slope_offset", (fit.slope - 2.0).abs(), 0.1)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_ordered() {
        let ids: Vec<&str> = CRITERIA.iter().map(|c| c.id).collect();
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(ids, sorted);
        assert_eq!(ids.len(), 11);
        assert!(criterion("ac07").is_some() && criterion("ac12").is_none());
    }

    #[test]
    fn tolerance_override_rejudges() {
        let c = Check::new("x", 2e-9, 1e-9);
        assert!(!c.pass);
        assert!(c.with_tolerance(1e-8).pass);
    }
}
