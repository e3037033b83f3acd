use std::fmt;
use std::sync::Arc;

use crate::dual::Dual;
use crate::error::{Error, Result};

type EvalFn = dyn Fn(&[Dual]) -> Dual + Send + Sync;

/// Differentiable function of the phase-space coordinates.
///
/// The evaluation map acts on dual numbers; plain values are read from the
/// real part and each gradient component from one seeded pass.
#[derive(Clone)]
pub struct Observable {
    label: String,
    f: Arc<EvalFn>,
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Observable").field("label", &self.label).finish()
    }
}

impl Observable {
    pub fn new(label: impl Into<String>, f: impl Fn(&[Dual]) -> Dual + Send + Sync + 'static) -> Self {
        Observable { label: label.into(), f: Arc::new(f) }
    }

    /// The `i`-th coordinate function.
    pub fn coordinate(label: impl Into<String>, i: usize) -> Self {
        Self::new(label, move |x| x[i])
    }

    pub fn constant(label: impl Into<String>, c: f64) -> Self {
        Self::new(label, move |_| Dual::constant(c))
    }

    /// Pointwise product `F·G`.
    pub fn product(a: &Observable, b: &Observable) -> Self {
        let (fa, fb) = (a.f.clone(), b.f.clone());
        Self::new(format!("({})*({})", a.label, b.label), move |x| fa(x) * fb(x))
    }

    /// Pointwise sum `F + G`.
    pub fn sum(a: &Observable, b: &Observable) -> Self {
        let (fa, fb) = (a.f.clone(), b.f.clone());
        Self::new(format!("({})+({})", a.label, b.label), move |x| fa(x) + fb(x))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn eval_dual(&self, x: &[Dual]) -> Dual {
        (self.f)(x)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let lifted: Vec<Dual> = x.iter().map(|&v| Dual::constant(v)).collect();
        (self.f)(&lifted).re
    }

    /// Directional derivative `dF(x)·v`.
    pub fn directional(&self, x: &[f64], v: &[f64]) -> f64 {
        (self.f)(&Dual::seed(x, v)).eps
    }

    /// Exact coordinate gradient.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let g: Vec<f64> = (0..x.len()).map(|i| (self.f)(&Dual::seed_axis(x, i)).eps).collect();
        if let Some(i) = g.iter().position(|v| !v.is_finite()) {
            return Err(Error::Evaluation(format!("non-finite derivative of {} along coordinate {i}", self.label)));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::Real;

    #[test]
    fn gradient_of_polynomial() {
        // F = x0² x1 + 3 x1
        let f = Observable::new("F", |x| x[0] * x[0] * x[1] + x[1] * 3.0);
        let g = f.gradient(&[2.0, -1.0]).unwrap();
        assert_eq!(g, vec![-4.0, 7.0]);
        assert_eq!(f.eval(&[2.0, -1.0]), -7.0);
    }

    #[test]
    fn non_finite_gradient_is_an_error() {
        let f = Observable::new("sqrt", |x| x[0].sqrt());
        assert!(matches!(f.gradient(&[0.0]), Err(Error::Evaluation(_))));
    }

    #[test]
    fn product_and_constant() {
        let a = Observable::coordinate("x", 0);
        let c = Observable::constant("c", 2.5);
        let p = Observable::product(&a, &c);
        assert_eq!(p.gradient(&[4.0]).unwrap(), vec![2.5]);
        assert_eq!(c.gradient(&[4.0]).unwrap(), vec![0.0]);
    }
}
