use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poisson::observable::Observable;
use crate::poisson::structure::{PhaseSpaceState, PoissonStructure};

fn gradient_at<P: PoissonStructure>(ps: &P, f: &Observable, s: &PhaseSpaceState) -> Result<Vec<f64>> {
    ps.check_state(&s.coords)?;
    f.gradient(&s.coords)
}

/// `Σ_{i<j} Π^{ij} (a_i b_j − a_j b_i)`: swapping the gradients negates every
/// term exactly, so the result is antisymmetric bit for bit.
fn contract(pi: &[f64], n: usize, a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let p = pi[i * n + j];
            if p != 0.0 {
                s += p * (a[i] * b[j] - a[j] * b[i]);
            }
        }
    }
    s
}

/// `{F, G}(s) = Σ Π^{ij}(s) ∂_iF ∂_jG`.
pub fn poisson_bracket<P: PoissonStructure>(ps: &P, f: &Observable, g: &Observable, s: &PhaseSpaceState) -> Result<f64> {
    let a = gradient_at(ps, f, s)?;
    let b = gradient_at(ps, g, s)?;
    let pi = ps.tensor(&s.coords);
    Ok(contract(&pi, ps.n_coords(), &a, &b))
}

/// `v_j = {H, x_j} = Σ_i Π^{ij} ∂_iH`, so that `ḟ = {H, f}`.
pub fn hamiltonian_vector_field<P: PoissonStructure>(ps: &P, h: &Observable, s: &PhaseSpaceState) -> Result<Vec<f64>> {
    let n = ps.n_coords();
    let dh = gradient_at(ps, h, s)?;
    let pi = ps.tensor(&s.coords);
    Ok((0..n).map(|j| (0..n).map(|i| pi[i * n + j] * dh[i]).sum()).collect())
}

/// Max-abs brackets of a family of observables over sample states.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CommutationReport {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

impl CommutationReport {
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j {
                    worst = worst.max(*v);
                }
            }
        }
        worst
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Entry `(i, j)` is `max_s |{F_i, F_j}(s)|`. Samples are evaluated in
/// parallel and reduced in sample order.
pub fn commutation_report<P: PoissonStructure>(
    ps: &P,
    observables: &[Observable],
    samples: &[PhaseSpaceState],
) -> Result<CommutationReport> {
    if samples.is_empty() {
        return Err(Error::Input("commutation report needs at least one sample".into()));
    }
    let m = observables.len();
    let n = ps.n_coords();
    let per_sample: Vec<Result<Vec<f64>>> = samples
        .par_iter()
        .map(|s| {
            let grads = observables.iter().map(|f| gradient_at(ps, f, s)).collect::<Result<Vec<_>>>()?;
            let pi = ps.tensor(&s.coords);
            let mut out = vec![0.0; m * m];
            for i in 0..m {
                for j in i + 1..m {
                    let v = contract(&pi, n, &grads[i], &grads[j]).abs();
                    out[i * m + j] = v;
                    out[j * m + i] = v;
                }
            }
            Ok(out)
        })
        .collect();
    let mut acc = vec![0.0f64; m * m];
    for r in per_sample {
        for (a, v) in acc.iter_mut().zip(r?) {
            *a = a.max(v);
        }
    }
    Ok(CommutationReport {
        labels: observables.iter().map(|o| o.label().to_string()).collect(),
        matrix: acc.chunks(m.max(1)).take(m).map(<[f64]>::to_vec).collect(),
    })
}

/// Numerical rank of the gradient matrix (singular values above `1e-8 ×` the largest).
pub fn independence_rank<P: PoissonStructure>(ps: &P, observables: &[Observable], s: &PhaseSpaceState) -> Result<usize> {
    let n = ps.n_coords();
    if observables.is_empty() {
        return Ok(0);
    }
    let rows = observables.iter().map(|f| gradient_at(ps, f, s)).collect::<Result<Vec<_>>>()?;
    let m = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let max = sv.max();
    if max == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&v| v > 1e-8 * max).count())
}

/// Uniform samples in the hypercube `base ± half_width`, redrawing any point
/// the structure rejects (e.g. `k_n = 0`).
pub fn sample_states<P: PoissonStructure>(
    ps: &P,
    base: &[f64],
    half_width: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<PhaseSpaceState>> {
    if base.len() != ps.n_coords() {
        return Err(Error::Dimension { expected: ps.n_coords(), got: base.len() });
    }
    if !(half_width >= 0.0 && half_width.is_finite()) {
        return Err(Error::Input(format!("half width must be finite and non-negative, got {half_width}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut rejected = 0usize;
    while out.len() < count {
        let x: Vec<f64> = base
            .iter()
            .map(|&b| if half_width > 0.0 { b + rng.random_range(-half_width..half_width) } else { b })
            .collect();
        if ps.check_state(&x).is_ok() {
            out.push(PhaseSpaceState::new(x));
        } else {
            rejected += 1;
            if rejected > 1000 + 100 * count {
                return Err(Error::Domain("sampling box contains no admissible states".into()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::structure::{CanonicalStructure, XxzStructure};
    use crate::Real;

    fn casimir() -> Observable {
        Observable::new("omega", |x| x[0] * x[0] + (x[0] * x[0]).recip() + x[1] * x[2])
    }

    #[test]
    fn canonical_pair() {
        let ps = CanonicalStructure::new(2);
        let p1 = Observable::coordinate("p_1", 0);
        let q1 = Observable::coordinate("q_1", 2);
        let s = PhaseSpaceState::new(vec![0.3, -0.2, 1.0, 0.5]);
        assert_eq!(poisson_bracket(&ps, &p1, &q1, &s).unwrap(), 1.0);
        let rep = commutation_report(&ps, &[q1, p1], &[s]).unwrap();
        assert_eq!(rep.matrix, vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn toda_coordinate_brackets() {
        // a_k = e^{q_{k-1} - q_k}, b_k = e^{p_k} with q_0 = 0, n = 2
        let ps = CanonicalStructure::new(2);
        let a1 = Observable::new("a_1", |x| (-x[2]).exp());
        let a2 = Observable::new("a_2", |x| (x[2] - x[3]).exp());
        let b1 = Observable::new("b_1", |x| x[0].exp());
        let s = PhaseSpaceState::new(vec![0.4, -0.7, 0.2, 1.1]);
        let ab = a1.eval(&s.coords) * b1.eval(&s.coords);
        assert!((poisson_bracket(&ps, &a1, &b1, &s).unwrap() - ab).abs() < 1e-14);
        let a2b1 = a2.eval(&s.coords) * b1.eval(&s.coords);
        assert!((poisson_bracket(&ps, &a2, &b1, &s).unwrap() + a2b1).abs() < 1e-14);
    }

    #[test]
    fn casimir_is_central() {
        let ps = XxzStructure::new(1);
        let s = PhaseSpaceState::new(vec![1.3, -0.4, 0.9]);
        let w = casimir();
        for i in 0..3 {
            let x = Observable::coordinate("x", i);
            assert!(poisson_bracket(&ps, &w, &x, &s).unwrap().abs() < 1e-14);
        }
        let v = hamiltonian_vector_field(&ps, &w, &s).unwrap();
        assert!(v.iter().all(|c| c.abs() < 1e-14));
    }

    #[test]
    fn toda_vector_field() {
        // H = e^{-2q_1} + e^{2(q_1-q_2)} + e^{2q_2} + Σ e^{2p_k}: q̇_k = 2e^{2p_k}
        let ps = CanonicalStructure::new(2);
        let h = Observable::new("H", |x| {
            (x[2] * -2.0).exp() + ((x[2] - x[3]) * 2.0).exp() + (x[3] * 2.0).exp() + (x[0] * 2.0).exp() + (x[1] * 2.0).exp()
        });
        let s = PhaseSpaceState::new(vec![0.1, -0.3, 0.5, 0.2]);
        let v = hamiltonian_vector_field(&ps, &h, &s).unwrap();
        assert!((v[2] - 2.0 * (0.2f64).exp()).abs() < 1e-14);
        assert!((v[3] - 2.0 * (-0.6f64).exp()).abs() < 1e-14);
        let c = Observable::constant("c", 3.0);
        assert!(hamiltonian_vector_field(&ps, &c, &s).unwrap().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rank_examples() {
        let ps = CanonicalStructure::new(1);
        let q = Observable::coordinate("q", 1);
        let q2 = Observable::product(&q, &q);
        let s = PhaseSpaceState::new(vec![0.2, 0.7]);
        assert_eq!(independence_rank(&ps, &[q.clone(), q2], &s).unwrap(), 1);
        let p = Observable::coordinate("p", 0);
        assert_eq!(independence_rank(&ps, &[q, p], &s).unwrap(), 2);
    }

    #[test]
    fn empty_samples_rejected() {
        let ps = CanonicalStructure::new(1);
        assert!(matches!(commutation_report(&ps, &[], &[]), Err(Error::Input(_))));
    }

    #[test]
    fn sampling_avoids_zero_k_and_is_reproducible() {
        let ps = XxzStructure::new(2);
        let a = sample_states(&ps, &[0.0; 6], 1.0, 20, 7).unwrap();
        let b = sample_states(&ps, &[0.0; 6], 1.0, 20, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|s| s.coords[0] != 0.0 && s.coords[3] != 0.0));
    }

    #[test]
    fn report_json_shape() {
        let ps = CanonicalStructure::new(1);
        let rep = commutation_report(&ps, &[Observable::coordinate("p", 0)], &[PhaseSpaceState::new(vec![0.0, 0.0])]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(v["labels"][0], "p");
        assert_eq!(v["matrix"][0][0], 0.0);
    }
}
