use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::poisson::bracket::hamiltonian_vector_field;
use crate::poisson::observable::Observable;
use crate::poisson::structure::{PhaseSpaceState, PoissonStructure};

/// Smallest admissible substep.
pub const MIN_STEP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    /// Output (and nominal integration) step.
    pub dt: f64,
    /// Step-halving tolerance on the max-abs difference between one full step
    /// and two half steps; `None` for plain fixed-step integration.
    pub tol: Option<f64>,
}

impl StepControl {
    pub fn fixed(dt: f64) -> Self {
        StepControl { dt, tol: None }
    }

    pub fn adaptive(dt: f64, tol: f64) -> Self {
        StepControl { dt, tol: Some(tol) }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub coord_labels: Vec<String>,
    pub invariant_labels: Vec<String>,
    pub times: Vec<f64>,
    pub states: Vec<PhaseSpaceState>,
    /// `recorded_invariants[t][i]` is invariant `i` at `times[t]`.
    pub recorded_invariants: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> &PhaseSpaceState {
        self.states.last().expect("trajectory has an initial state")
    }

    /// `max_t |I(t) − I(0)|` for each recorded invariant.
    pub fn invariant_drift(&self) -> Vec<f64> {
        let Some(first) = self.recorded_invariants.first() else {
            return Vec::new();
        };
        (0..first.len())
            .map(|i| self.recorded_invariants.iter().map(|row| (row[i] - first[i]).abs()).fold(0.0, f64::max))
            .collect()
    }

    /// Header `t,<coords>,<invariants>`; values in 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for l in self.coord_labels.iter().chain(&self.invariant_labels) {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for ((t, s), inv) in self.times.iter().zip(&self.states).zip(&self.recorded_invariants) {
            write!(out, "{t:.16e}").unwrap();
            for v in s.coords.iter().chain(inv) {
                write!(out, ",{v:.16e}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

fn axpy(y: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k).map(|(y, k)| y + a * k).collect()
}

fn rk4_step<P: PoissonStructure>(ps: &P, h: &Observable, y: &[f64], dt: f64, t: f64) -> Result<Vec<f64>> {
    let field = |x: Vec<f64>| -> Result<Vec<f64>> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence(t));
        }
        hamiltonian_vector_field(ps, h, &PhaseSpaceState::new(x)).map_err(|e| match e {
            Error::Evaluation(_) => Error::Divergence(t),
            e => e,
        })
    };
    let k1 = field(y.to_vec())?;
    let k2 = field(axpy(y, dt / 2.0, &k1))?;
    let k3 = field(axpy(y, dt / 2.0, &k2))?;
    let k4 = field(axpy(y, dt, &k3))?;
    let out: Vec<f64> = (0..y.len()).map(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect();
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Divergence(t + dt));
    }
    Ok(out)
}

/// Classic RK4 for `ẋ = X_H(x)` from `t = 0` to `t_final`, with output every
/// `dt` (the last interval is shortened to land on `t_final`). With a
/// tolerance, each interval is covered by substeps halved until one full step
/// and two half steps agree to `tol`.
pub fn integrate_flow<P: PoissonStructure>(
    ps: &P,
    h: &Observable,
    s0: &PhaseSpaceState,
    t_final: f64,
    control: StepControl,
    invariants: &[Observable],
) -> Result<Trajectory> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::Input(format!("t_final must be positive, got {t_final}")));
    }
    if !(control.dt > 0.0 && control.dt.is_finite()) {
        return Err(Error::Input(format!("dt must be positive, got {}", control.dt)));
    }
    if control.dt < MIN_STEP {
        return Err(Error::Stiffness { t: 0.0, dt: control.dt });
    }
    if let Some(tol) = control.tol {
        if !(tol > 0.0) {
            return Err(Error::Input(format!("tol must be positive, got {tol}")));
        }
    }
    ps.check_state(&s0.coords)?;
    let record = |x: &[f64]| invariants.iter().map(|f| f.eval(x)).collect::<Vec<f64>>();

    let mut traj = Trajectory {
        coord_labels: ps.coord_labels(),
        invariant_labels: invariants.iter().map(|f| f.label().to_string()).collect(),
        times: vec![0.0],
        states: vec![s0.clone()],
        recorded_invariants: vec![record(&s0.coords)],
    };
    let steps = (t_final / control.dt).ceil().max(1.0) as usize;
    let mut y = s0.coords.clone();
    let mut t = 0.0;
    let mut sub = control.dt;
    for i in 1..=steps {
        let t_next = if i == steps { t_final } else { i as f64 * control.dt };
        match control.tol {
            None => {
                y = rk4_step(ps, h, &y, t_next - t, t)?;
                t = t_next;
            }
            Some(tol) => {
                while t < t_next {
                    let hstep = sub.min(t_next - t);
                    if hstep < MIN_STEP {
                        return Err(Error::Stiffness { t, dt: hstep });
                    }
                    let full = rk4_step(ps, h, &y, hstep, t);
                    let halves = rk4_step(ps, h, &y, hstep / 2.0, t)
                        .and_then(|m| rk4_step(ps, h, &m, hstep / 2.0, t + hstep / 2.0));
                    let accepted = match (full, halves) {
                        (Ok(f), Ok(two)) => {
                            let err = f.iter().zip(&two).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                            (err <= tol).then_some(two)
                        }
                        (Err(Error::Divergence(_)), _) | (_, Err(Error::Divergence(_))) => None,
                        (Err(e), _) | (_, Err(e)) => return Err(e),
                    };
                    match accepted {
                        Some(next) => {
                            y = next;
                            t = if t + hstep >= t_next || t_next - (t + hstep) < MIN_STEP { t_next } else { t + hstep };
                            sub = (2.0 * hstep).min(control.dt);
                        }
                        None => {
                            sub = hstep / 2.0;
                            if sub < MIN_STEP {
                                return Err(Error::Stiffness { t, dt: sub });
                            }
                        }
                    }
                }
            }
        }
        ps.check_state(&y).map_err(|_| Error::Divergence(t))?;
        traj.times.push(t);
        traj.recorded_invariants.push(record(&y));
        traj.states.push(PhaseSpaceState::new(y.clone()));
    }
    Ok(traj)
}
