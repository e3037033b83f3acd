//! Dispatch of a configuration to the owning module and collection of checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cre_core::lie::exact::{cre_defect_exact, ExactMatrix};
use cre_core::lie::presets::{algebra, automorphism, skew_r_matrix, standard_r_matrix};
use cre_core::lie::{cre_defect, cybe_defect, mcybe_defect, AlgebraFile, LieAlgebraData};
use cre_core::poisson::{
    commutation_report, integrate_flow, poisson_bracket, sample_states, Observable, PhaseSpaceState, StepControl,
    XxzStructure,
};
use cre_core::suite;
use cre_core::toda::{
    build_monodromy, calibrate_kappa, factorization_solve, reflection_hamiltonian, spectral_invariants, TodaChart,
};
use cre_core::xxz::{
    evolve_chain, lax_matrix, local_hamiltonian_observable, product_formula_ratio, reflection_algebra_check,
    transfer_observable, ChainState, LaurentMatrix, LaurentPoly, SiteState,
};

use crate::config::{ExperimentConfig, Kind, XxzHamiltonian};
use crate::error::CliError;
use crate::report::{ReportCheck, VerificationReport};

/// Result of a run: the report, per-check wall times and named data files.
#[derive(Debug)]
pub struct Outcome {
    pub report: VerificationReport,
    pub timings: BTreeMap<String, f64>,
    pub data_files: Vec<(String, String)>,
}

struct Collector<'a> {
    overrides: &'a BTreeMap<String, f64>,
    rows: Vec<ReportCheck>,
    timings: BTreeMap<String, f64>,
}

impl<'a> Collector<'a> {
    fn new(overrides: &'a BTreeMap<String, f64>) -> Self {
        Collector { overrides, rows: Vec::new(), timings: BTreeMap::new() }
    }

    fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.overrides.get(name).copied().unwrap_or(default)
    }

    /// Run `f`, which yields one defect per entry of `names`.
    fn group<const N: usize>(
        &mut self,
        names: [(&str, f64); N],
        f: impl FnOnce() -> cre_core::Result<[f64; N]>,
    ) -> bool {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        let ok = result.is_ok();
        for (i, (name, default)) in names.iter().enumerate() {
            let tolerance = self.tolerance(name, *default);
            let row = match &result {
                Ok(v) => ReportCheck::measured(name, v[i], tolerance),
                Err(e) => ReportCheck::failed(name, tolerance, e.to_string()),
            };
            self.rows.push(row);
            self.timings.insert(name.to_string(), secs);
        }
        ok
    }

    fn one(&mut self, name: &str, default: f64, f: impl FnOnce() -> cre_core::Result<f64>) -> bool {
        self.group([(name, default)], || f().map(|v| [v]))
    }

    fn finish(self) -> Result<(Vec<ReportCheck>, BTreeMap<String, f64>), CliError> {
        let names: BTreeSet<&str> = self.rows.iter().map(|r| r.name.as_str()).collect();
        if let Some(unknown) = self.overrides.keys().find(|k| !names.contains(k.as_str())) {
            return Err(CliError::Config(format!(
                "tolerance override '{unknown}' matches no check; checks are: {}",
                names.into_iter().collect::<Vec<_>>().join(", ")
            )));
        }
        Ok((self.rows, self.timings))
    }
}

pub fn run(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let mut col = Collector::new(&config.tolerances);
    let data_files = match config.kind {
        Kind::VerifyLie => run_lie(config, &mut col)?,
        Kind::Toda => run_toda(config, &mut col)?,
        Kind::Xxz => run_xxz(config, &mut col)?,
        Kind::Acceptance => run_acceptance(config, &mut col)?,
    };
    let (checks, timings) = col.finish()?;
    Ok(Outcome { report: VerificationReport::new(config, checks), timings, data_files })
}

fn load_algebra(config: &ExperimentConfig) -> Result<LieAlgebraData, CliError> {
    let sec = config.lie();
    match &sec.algebra_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            Ok(AlgebraFile::parse(&text)?.build(1e-12)?)
        }
        None => Ok(algebra(&sec.algebra)?),
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn run_lie(config: &ExperimentConfig, col: &mut Collector) -> Result<Vec<(String, String)>, CliError> {
    let sec = config.lie();
    let g = load_algebra(config)?;
    let sigma = automorphism(&g, &sec.automorphism)?;
    col.one("structure_antisymmetry", 1e-12, || Ok(g.antisymmetry_defect()));
    col.one("structure_jacobi", 1e-12, || Ok(g.jacobi_defect()));
    col.one("automorphism_defect", 1e-10, || sigma.homomorphism_defect(&g));
    col.one("cre_defect", 1e-10, || Ok(cre_defect(&g, &skew_r_matrix(&g)?, &sigma)?.norm()));
    col.one("cre_defect_exact", 0.0, || {
        let c = cre_defect_exact(
            &ExactMatrix::from_tensor(&skew_r_matrix(&g)?)?,
            &ExactMatrix::from_automorphism(&sigma)?,
        );
        Ok(if c.is_zero() { 0.0 } else { f64::INFINITY })
    });
    col.one("cybe_defect", 1e-10, || Ok(cybe_defect(&g, &standard_r_matrix(&g)?)?.norm()));
    col.one("mcybe_defect", 1e-10, || {
        use rand::Rng;
        let r = standard_r_matrix(&g)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut worst: f64 = 0.0;
        for _ in 0..sec.mcybe_pairs {
            let x: Vec<f64> = (0..g.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..g.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
            worst = worst.max(max_abs(&mcybe_defect(&g, &r, &x, &y)?));
        }
        Ok(worst)
    });
    Ok(Vec::new())
}

fn eigen_drift(reference: &[f64], t: &DMatrix<f64>) -> cre_core::Result<f64> {
    let e = spectral_invariants(t)?.eigenvalues;
    Ok(reference.iter().zip(&e).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

fn toda_chart(config: &ExperimentConfig) -> Result<TodaChart, CliError> {
    let sec = config.toda();
    if sec.n == 0 {
        return Err(CliError::Config("toda.n must be at least 1".into()));
    }
    match (&sec.p, &sec.q) {
        (Some(p), Some(q)) => {
            if p.len() != sec.n || q.len() != sec.n {
                return Err(CliError::Config(format!("toda.p and toda.q need {} entries each", sec.n)));
            }
            Ok(TodaChart::new(p.clone(), q.clone())?)
        }
        (None, None) => Ok(TodaChart::random_seeded(sec.n, sec.scale, config.seed)?),
        _ => Err(CliError::Config("give both toda.p and toda.q or neither".into())),
    }
}

fn run_toda(config: &ExperimentConfig, col: &mut Collector) -> Result<Vec<(String, String)>, CliError> {
    let sec = config.toda();
    let chart = toda_chart(config)?;
    let n = chart.n;
    if !(sec.dt > 0.0 && sec.t_final >= 0.0) {
        return Err(CliError::Config("toda.dt must be positive and toda.t_final non-negative".into()));
    }
    let kappa = match sec.kappa {
        Some(k) => k,
        None => {
            let mut kappa = f64::NAN;
            col.one("kappa_residual", 1e-8, || {
                let cal = calibrate_kappa(n, sec.calibration_samples, config.seed)?;
                kappa = cal.kappa;
                Ok(cal.residual)
            });
            kappa
        }
    };
    let t0 = build_monodromy(&chart).to_matrix();
    col.one("monodromy_det", 1e-10, || Ok((t0.determinant() - 1.0).abs()));
    let ps = chart.structure();
    let traces = (1..=n as u32 + 1).map(|m| reflection_hamiltonian(n, m)).collect::<cre_core::Result<Vec<_>>>()?;
    let samples = sample_states(&ps, &chart.to_state().coords, 0.3, sec.commutation_samples.max(1), config.seed)?;
    col.one("toda_commutation", 1e-9, || Ok(commutation_report(&ps, &traces[..n], &samples)?.max_off_diagonal()));
    let h = reflection_hamiltonian(n, sec.m)?;
    let mut files = Vec::new();
    let e0 = spectral_invariants(&t0)?.eigenvalues;
    let mut rk_final = None;
    col.one("isospectral_rk4", 1e-8, || {
        let tr = integrate_flow(&ps, &h, &chart.to_state(), sec.t_final, StepControl::fixed(sec.dt), &traces)?;
        let mut drift: f64 = 0.0;
        let mut inv = String::from("t");
        for k in 1..=n + 1 {
            write!(inv, ",eig_{k}").unwrap();
        }
        for k in 1..=n + 1 {
            if k == 1 {
                inv.push_str(",trT");
            } else {
                write!(inv, ",trT{k}").unwrap();
            }
        }
        inv.push('\n');
        for (t, s) in tr.times.iter().zip(&tr.states) {
            let tm = build_monodromy(&TodaChart::from_state(n, s)?).to_matrix();
            let si = spectral_invariants(&tm)?;
            drift = drift.max(eigen_drift(&e0, &tm)?);
            write!(inv, "{t:.16e}").unwrap();
            for v in si.eigenvalues.iter().chain(&si.traces) {
                write!(inv, ",{v:.16e}").unwrap();
            }
            inv.push('\n');
        }
        files.push(("trajectory.csv".to_string(), tr.to_csv()));
        files.push(("invariants.csv".to_string(), inv));
        rk_final = Some(build_monodromy(&TodaChart::from_state(n, tr.last_state())?).to_matrix());
        Ok(drift)
    });
    col.one("isospectral_factorization", 1e-12, || {
        let mut drift: f64 = 0.0;
        for i in 1..=10 {
            let t = sec.t_final * i as f64 / 10.0;
            drift = drift.max(eigen_drift(&e0, &factorization_solve(&t0, sec.m, t, kappa)?)?);
        }
        Ok(drift)
    });
    col.one("factorization_vs_rk4", 1e-6, || {
        let direct = rk_final.clone().ok_or_else(|| cre_core::Error::Evaluation("direct integration failed".into()))?;
        Ok((factorization_solve(&t0, sec.m, sec.t_final, kappa)? - direct).amax())
    });
    files.push(("commutation.json".to_string(), commutation_report(&ps, &traces, &samples)?.to_json() + "\n"));
    Ok(files)
}

fn xxz_chain(config: &ExperimentConfig) -> Result<ChainState, CliError> {
    let sec = config.xxz();
    match (&sec.initial, &sec.t_n) {
        (Some(init), leaf) => {
            if init.len() != sec.sites {
                return Err(CliError::Config(format!("xxz.initial needs {} (k, e, f) triples", sec.sites)));
            }
            let leaf = leaf.clone().unwrap_or_else(|| vec![sec.t; sec.sites]);
            let sites = init.iter().map(|&[k, e, f]| SiteState::new(k, e, f)).collect::<cre_core::Result<Vec<_>>>()?;
            Ok(ChainState::new(sites, leaf, sec.xi_plus, sec.xi_minus)?)
        }
        (None, Some(_)) => Err(CliError::Config("xxz.t_n requires explicit xxz.initial sites".into())),
        (None, None) => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            Ok(ChainState::random_on_leaf(sec.sites, sec.t, sec.xi_plus, sec.xi_minus, sec.spread, &mut rng)?)
        }
    }
}

fn run_xxz(config: &ExperimentConfig, col: &mut Collector) -> Result<Vec<(String, String)>, CliError> {
    let sec = config.xxz();
    let c = xxz_chain(config)?;
    let n = c.n_sites();
    col.one("laurent_unitarity", 1e-13, || {
        let mut worst: f64 = 0.0;
        for s in &c.sites {
            let l = lax_matrix(s)?;
            let scalar = LaurentPoly::from_terms([(0, s.casimir()), (2, -1.0), (-2, -1.0)]);
            worst = worst.max(l.mul(&l.invert_variable()).sub(&LaurentMatrix::scalar(scalar)).max_abs_coeff());
        }
        Ok(worst)
    });
    col.group([("sklyanin_defect", 1e-8), ("reflection_defect", 1e-8)], || {
        let d = reflection_algebra_check(&c, sec.z, sec.w)?;
        Ok([d.sklyanin, d.reflection])
    });
    let ps = XxzStructure::new(n);
    col.one("transfer_commutation", 1e-8, || {
        let tz = transfer_observable(c.xi_plus, c.xi_minus, sec.z)?;
        let tw = transfer_observable(c.xi_plus, c.xi_minus, sec.w)?;
        Ok(poisson_bracket(&ps, &tz, &tw, &PhaseSpaceState::new(c.coords()))?.abs())
    });
    let homogeneous = c.homogeneous_t().ok();
    if let Some(t) = homogeneous {
        col.one("product_formula_spread", 1e-9, || {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1));
            let mut ratios = vec![product_formula_ratio(&c)?];
            for _ in 1..sec.product_samples.max(2) {
                let s = ChainState::random_on_leaf(n, t, c.xi_plus, c.xi_minus, sec.spread, &mut rng)?;
                ratios.push(product_formula_ratio(&s)?);
            }
            let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
            let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Ok((hi - lo) / mean.abs())
        });
    }
    let h: Observable = match (sec.hamiltonian, homogeneous) {
        (XxzHamiltonian::Local, Some(t)) => local_hamiltonian_observable(t, c.xi_plus, c.xi_minus),
        (XxzHamiltonian::Local, None) => {
            return Err(CliError::Config("the local Hamiltonian needs a homogeneous leaf (common t)".into()))
        }
        (XxzHamiltonian::Transfer, _) => transfer_observable(c.xi_plus, c.xi_minus, sec.hamiltonian_z)?,
    };
    let mut files = Vec::new();
    let flow_checks = [("omega_drift", 1e-8), ("tau_drift", 1e-6), ("log_domain_exits", 0.0)];
    col.group(flow_checks, || {
        let ev = evolve_chain(&c, &h, sec.t_final, StepControl::fixed(sec.dt), &sec.tau_points)?;
        let d = ev.drifts();
        let (omega, tau) = d.split_at(n);
        files.push(("trajectory.csv".to_string(), ev.trajectory.to_csv()));
        let exits = if sec.hamiltonian == XxzHamiltonian::Local { ev.log_domain_exits.len() } else { 0 };
        Ok([max_abs(omega), max_abs(tau), exits as f64])
    });
    Ok(files)
}

fn run_acceptance(config: &ExperimentConfig, col: &mut Collector) -> Result<Vec<(String, String)>, CliError> {
    let ids = &config.acceptance.as_ref().expect("validated").criteria;
    for id in ids {
        let c = suite::criterion(id).ok_or_else(|| CliError::Config(format!("unknown criterion '{id}'")))?;
        let start = Instant::now();
        let result = (c.run)(config.seed);
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(checks) => {
                for ch in checks {
                    let tolerance = col.tolerance(&ch.name, ch.tolerance);
                    col.timings.insert(ch.name.clone(), secs);
                    col.rows.push(ReportCheck::measured(&ch.name, ch.defect, tolerance));
                }
            }
            Err(e) => {
                col.timings.insert(c.id.to_string(), secs);
                col.rows.push(ReportCheck::failed(c.id, 0.0, e.to_string()));
            }
        }
    }
    Ok(Vec::new())
}
