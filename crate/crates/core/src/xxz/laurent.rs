use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Coefficients with magnitude below this are dropped after arithmetic.
pub const PRUNE: f64 = 1e-14;

/// Real Laurent polynomial `Σ c_d z^d`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, f64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: f64, deg: i32) -> Self {
        Self::from_terms([(deg, c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, f64)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (d, c) in terms {
            *coeffs.entry(d).or_insert(0.0) += c;
        }
        let mut p = LaurentPoly { coeffs };
        p.prune();
        p
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| c.abs() >= PRUNE);
    }

    pub fn coeff(&self, deg: i32) -> f64 {
        self.coeffs.get(&deg).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.coeffs.iter().map(|(&d, &c)| (d, c))
    }

    pub fn min_deg(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_deg(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_terms(self.terms().map(|(d, c)| (d, c * s)))
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        if z == 0.0 && self.min_deg().is_some_and(|d| d < 0) {
            return Err(Error::Domain("negative power evaluated at z = 0".into()));
        }
        Ok(self.terms().map(|(d, c)| c * z.powi(d)).sum())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().chain(o.terms()))
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().chain(o.terms().map(|(d, c)| (d, -c))))
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1.0)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().flat_map(|(d1, c1)| o.terms().map(move |(d2, c2)| (d1 + d2, c1 * c2))))
    }
}

/// 2×2 matrix of Laurent polynomials.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentMatrix {
    pub entries: [[LaurentPoly; 2]; 2],
}

impl LaurentMatrix {
    pub fn new(a: LaurentPoly, b: LaurentPoly, c: LaurentPoly, d: LaurentPoly) -> Self {
        LaurentMatrix { entries: [[a, b], [c, d]] }
    }

    pub fn identity() -> Self {
        Self::scalar(LaurentPoly::constant(1.0))
    }

    pub fn scalar(p: LaurentPoly) -> Self {
        Self::new(p.clone(), LaurentPoly::zero(), LaurentPoly::zero(), p)
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i][j]
    }

    pub fn mul(&self, o: &LaurentMatrix) -> LaurentMatrix {
        let e = |i: usize, j: usize| &(&self.entries[i][0] * &o.entries[0][j]) + &(&self.entries[i][1] * &o.entries[1][j]);
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn sub(&self, o: &LaurentMatrix) -> LaurentMatrix {
        let e = |i: usize, j: usize| &self.entries[i][j] - &o.entries[i][j];
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn det(&self) -> LaurentPoly {
        let m = &self.entries;
        &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
    }

    pub fn trace(&self) -> LaurentPoly {
        &self.entries[0][0] + &self.entries[1][1]
    }

    /// `M(z) ↦ M(z⁻¹)`.
    pub fn invert_variable(&self) -> LaurentMatrix {
        let f = |p: &LaurentPoly| LaurentPoly::from_terms(p.terms().map(|(d, c)| (-d, c)));
        let m = &self.entries;
        Self::new(f(&m[0][0]), f(&m[0][1]), f(&m[1][0]), f(&m[1][1]))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.entries.iter().flatten().map(LaurentPoly::max_abs_coeff).fold(0.0, f64::max)
    }

    /// Smallest and largest exponent over all entries.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = self.entries.iter().flatten().filter_map(LaurentPoly::min_deg).min()?;
        let hi = self.entries.iter().flatten().filter_map(LaurentPoly::max_deg).max()?;
        Some((lo, hi))
    }

    pub fn eval(&self, z: f64) -> Result<[[f64; 2]; 2]> {
        let m = &self.entries;
        Ok([[m[0][0].eval(z)?, m[0][1].eval(z)?], [m[1][0].eval(z)?, m[1][1].eval(z)?]])
    }
}
