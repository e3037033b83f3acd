use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::poisson::hamiltonian_vector_field;
use crate::toda::monodromy::{build_monodromy, monodromy_dense, reflection_hamiltonian, TodaChart};

/// Largest accepted relative fit residual of the κ calibration.
pub const KAPPA_RESIDUAL_LIMIT: f64 = 1e-6;

/// `κ·m·(U − Uᵀ)`, `U` the strict upper triangle of `T^m`.
pub fn lax_generator(t: &DMatrix<f64>, m: u32, kappa: f64) -> DMatrix<f64> {
    let n = t.nrows();
    let mut pw = t.clone();
    for _ in 1..m.max(1) {
        pw = &pw * t;
    }
    let s = kappa * m as f64;
    DMatrix::from_fn(n, n, |i, j| {
        if i < j {
            s * pw[(i, j)]
        } else if i > j {
            -s * pw[(j, i)]
        } else {
            0.0
        }
    })
}

/// `[A, T]`.
pub fn commutator(a: &DMatrix<f64>, t: &DMatrix<f64>) -> DMatrix<f64> {
    a * t - t * a
}

/// `dT/dt` along the canonical flow of `tr T^m`, by the chain rule
/// (one dual-number pass in the direction of the Hamiltonian vector field).
pub fn flow_derivative(chart: &TodaChart, m: u32) -> Result<DMatrix<f64>> {
    let h = reflection_hamiltonian(chart.n, m)?;
    let s = chart.to_state();
    let v = hamiltonian_vector_field(&chart.structure(), &h, &s)?;
    let t = monodromy_dense(chart.n, &Dual::seed(&s.coords, &v));
    let size = chart.n + 1;
    Ok(DMatrix::from_fn(size, size, |i, j| t[i * size + j].eps))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaCalibration {
    pub kappa: f64,
    /// `max_i ‖κ C_i − Ṫ_i‖_F / ‖Ṫ_i‖_F` over the samples.
    pub residual: f64,
    pub samples: usize,
}

/// Least-squares `κ` in `Ṫ = κ·[U − Uᵀ, T]` over charts drawn from `seed`.
pub fn calibrate_kappa(n: usize, samples: usize, seed: u64) -> Result<KappaCalibration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let charts = (0..samples).map(|_| TodaChart::random(n, 1.0, &mut rng)).collect::<Result<Vec<_>>>()?;
    calibrate_kappa_on(&charts)
}

pub fn calibrate_kappa_on(charts: &[TodaChart]) -> Result<KappaCalibration> {
    if charts.len() < 10 {
        return Err(Error::Input(format!("calibration needs at least 10 charts, got {}", charts.len())));
    }
    let pairs = charts
        .iter()
        .map(|c| {
            let t = build_monodromy(c).to_matrix();
            Ok((commutator(&lax_generator(&t, 1, 1.0), &t), flow_derivative(c, 1)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut num, mut den) = (0.0, 0.0);
    for (c, d) in &pairs {
        num += c.dot(d);
        den += c.dot(c);
    }
    if den == 0.0 {
        return Err(Error::Numerical("calibration design matrix vanishes".into()));
    }
    let kappa = num / den;
    let residual = pairs
        .iter()
        .map(|(c, d)| (c * kappa - d).norm() / d.norm().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    if !(residual <= KAPPA_RESIDUAL_LIMIT) {
        return Err(Error::ConventionMismatch { kappa, residual, tolerance: KAPPA_RESIDUAL_LIMIT });
    }
    Ok(KappaCalibration { kappa, residual, samples: charts.len() })
}
