//! First-order dual numbers `a + b·ε` with `ε² = 0`.
//!
//! Evaluating a function on `Dual::variable(x)` yields `f(x)` in the real part
//! and `f'(x)` in the infinitesimal part, exactly up to rounding. Observables and
//! Poisson tensors are written once against the [`Real`] trait and evaluated
//! either on `f64` or on `Dual` when gradients are needed.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Scalar arithmetic shared by `f64` and [`Dual`].
pub trait Real:
    Copy
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(v: f64) -> Self;
    fn value(self) -> f64;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;

    fn zero() -> Self {
        Self::cst(0.0)
    }

    fn one() -> Self {
        Self::cst(1.0)
    }

    fn recip(self) -> Self {
        Self::one() / self
    }

    fn powi(self, n: i32) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut acc = Self::one();
        let mut base = self;
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
}

impl Real for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

/// Dual number: real part `re`, first-order part `eps`.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Dual {
    pub re: f64,
    pub eps: f64,
}

impl Dual {
    pub const fn new(re: f64, eps: f64) -> Self {
        Dual { re, eps }
    }

    /// Seeded variable: derivative part 1.
    pub const fn variable(re: f64) -> Self {
        Dual { re, eps: 1.0 }
    }

    pub const fn constant(re: f64) -> Self {
        Dual { re, eps: 0.0 }
    }

    /// Lift a point, seeding direction `dir` (`x + t·dir` at `t = 0`).
    pub fn seed(point: &[f64], dir: &[f64]) -> Vec<Dual> {
        point
            .iter()
            .zip(dir)
            .map(|(&x, &d)| Dual::new(x, d))
            .collect()
    }

    /// Lift a point, seeding the unit direction along coordinate `axis`.
    pub fn seed_axis(point: &[f64], axis: usize) -> Vec<Dual> {
        point
            .iter()
            .enumerate()
            .map(|(i, &x)| Dual::new(x, if i == axis { 1.0 } else { 0.0 }))
            .collect()
    }

    pub fn lift(point: &[f64]) -> Vec<Dual> {
        point.iter().map(|&x| Dual::constant(x)).collect()
    }
}

impl fmt::Debug for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}ε", self.re, self.eps)
    }
}

impl fmt::Display for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ε", self.re, self.eps)
    }
}

impl Add for Dual {
    type Output = Dual;
    #[inline]
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.re + o.re, self.eps + o.eps)
    }
}

impl Sub for Dual {
    type Output = Dual;
    #[inline]
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.re - o.re, self.eps - o.eps)
    }
}

impl Mul for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.re * o.re, self.re * o.eps + self.eps * o.re)
    }
}

impl Div for Dual {
    type Output = Dual;
    #[inline]
    fn div(self, o: Dual) -> Dual {
        let inv = 1.0 / o.re;
        Dual::new(self.re * inv, (self.eps * o.re - self.re * o.eps) * inv * inv)
    }
}

impl Neg for Dual {
    type Output = Dual;
    #[inline]
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.eps)
    }
}

impl AddAssign for Dual {
    #[inline]
    fn add_assign(&mut self, o: Dual) {
        *self = *self + o;
    }
}

impl SubAssign for Dual {
    #[inline]
    fn sub_assign(&mut self, o: Dual) {
        *self = *self - o;
    }
}

impl MulAssign for Dual {
    #[inline]
    fn mul_assign(&mut self, o: Dual) {
        *self = *self * o;
    }
}

impl Add<f64> for Dual {
    type Output = Dual;
    #[inline]
    fn add(self, o: f64) -> Dual {
        Dual::new(self.re + o, self.eps)
    }
}

impl Sub<f64> for Dual {
    type Output = Dual;
    #[inline]
    fn sub(self, o: f64) -> Dual {
        Dual::new(self.re - o, self.eps)
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, o: f64) -> Dual {
        Dual::new(self.re * o, self.eps * o)
    }
}

impl Div<f64> for Dual {
    type Output = Dual;
    #[inline]
    fn div(self, o: f64) -> Dual {
        Dual::new(self.re / o, self.eps / o)
    }
}

impl Real for Dual {
    #[inline]
    fn cst(v: f64) -> Self {
        Dual::constant(v)
    }
    #[inline]
    fn value(self) -> f64 {
        self.re
    }
    #[inline]
    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual::new(e, self.eps * e)
    }
    #[inline]
    fn ln(self) -> Self {
        Dual::new(self.re.ln(), self.eps / self.re)
    }
    #[inline]
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        Dual::new(s, self.eps / (2.0 * s))
    }
}

/// Derivative of a scalar function at `x`.
pub fn derivative(f: impl Fn(Dual) -> Dual, x: f64) -> f64 {
    f(Dual::variable(x)).eps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_quotient_rules() {
        let d = derivative(|x| x * x * x, 2.0);
        assert_eq!(d, 12.0);
        let d = derivative(|x| Dual::constant(1.0) / x, 4.0);
        assert_eq!(d, -1.0 / 16.0);
    }

    #[test]
    fn transcendental() {
        let x = 0.7;
        assert!((derivative(|v| v.exp(), x) - x.exp()).abs() < 1e-15);
        assert!((derivative(|v| v.ln(), x) - 1.0 / x).abs() < 1e-15);
        assert!((derivative(|v| v.sqrt(), x) - 0.5 / x.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn integer_powers() {
        let x = 1.3;
        assert!((derivative(|v| v.powi(5), x) - 5.0 * x.powi(4)).abs() < 1e-12);
        assert!((derivative(|v| v.powi(-2), x) + 2.0 * x.powi(-3)).abs() < 1e-12);
        assert_eq!(Real::powi(x, 0), 1.0);
    }

    #[test]
    fn central_differences_agree() {
        let f = |v: Dual| (v * v + 1.0).ln() * (v * 0.5).exp() - v.powi(3) / (v + 3.0);
        let g = |v: f64| (v * v + 1.0).ln() * (v * 0.5).exp() - v.powi(3) / (v + 3.0);
        for &x in &[-1.2, 0.1, 0.9, 2.5] {
            let h = 1e-6;
            let fd = (g(x + h) - g(x - h)) / (2.0 * h);
            let ad = derivative(f, x);
            assert!((fd - ad).abs() <= 1e-6 * ad.abs().max(1.0));
        }
    }
}
