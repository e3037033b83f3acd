//! Exact rational arithmetic for structure-constant and defect checks whose
//! inputs are all rational (every bundled algebra, `θ`, `r̂`, and `r̃`).

use num::{BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::lie::algebra::LieAlgebraData;
use crate::lie::tensor::{Automorphism, TensorElement};

/// Exact conversion of a finite double (every double is a dyadic rational).
pub fn to_rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Input(format!("{x} is not finite")))
}

fn to_rationals(xs: &[f64]) -> Result<Vec<BigRational>> {
    xs.iter().map(|&x| to_rational(x)).collect()
}

/// Structure constants held as exact rationals.
#[derive(Debug, Clone)]
pub struct ExactAlgebra {
    dim: usize,
    sparse: Vec<(usize, usize, usize, BigRational)>,
    dense: Vec<BigRational>,
}

impl ExactAlgebra {
    pub fn from_algebra(alg: &LieAlgebraData) -> Result<Self> {
        let dense = to_rationals(alg.structure_constants())?;
        let sparse = alg
            .nonzero_constants()
            .iter()
            .map(|&(i, j, k, c)| Ok((i, j, k, to_rational(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactAlgebra { dim: alg.dim(), sparse, dense })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn c(&self, i: usize, j: usize, k: usize) -> &BigRational {
        &self.dense[(i * self.dim + j) * self.dim + k]
    }

    /// True iff the Jacobi cyclic sum vanishes identically.
    pub fn jacobi_holds(&self) -> bool {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut s = BigRational::zero();
                        for m in 0..d {
                            s += self.c(i, j, m) * self.c(m, k, l)
                                + self.c(j, k, m) * self.c(m, i, l)
                                + self.c(k, i, m) * self.c(m, j, l);
                        }
                        if !s.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `[[r, r]]` with rational coefficients (row-major `dim³`).
    pub fn cybe_defect(&self, r: &ExactMatrix) -> Vec<BigRational> {
        let d = self.dim;
        let mut out = vec![BigRational::zero(); d * d * d];
        let idx = |a: usize, b: usize, c: usize| (a * d + b) * d + c;
        for (i, j, e, c) in &self.sparse {
            let (i, j, e) = (*i, *j, *e);
            for b in 0..d {
                let rib = r.get(i, b);
                if rib.is_zero() {
                    continue;
                }
                for dd in 0..d {
                    let rjd = r.get(j, dd);
                    if !rjd.is_zero() {
                        out[idx(e, b, dd)] += c * rib * rjd;
                    }
                }
            }
            for a in 0..d {
                let rai = r.get(a, i);
                if rai.is_zero() {
                    continue;
                }
                for b in 0..d {
                    let rbj = r.get(b, j);
                    if !rbj.is_zero() {
                        out[idx(a, b, e)] += c * rai * rbj;
                    }
                }
                for dd in 0..d {
                    let rjd = r.get(j, dd);
                    if !rjd.is_zero() {
                        out[idx(a, e, dd)] += c * rai * rjd;
                    }
                }
            }
        }
        out
    }
}

/// Square rational matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn from_f64(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Dimension { expected: n * n, got: data.len() });
        }
        Ok(ExactMatrix { n, data: to_rationals(data)? })
    }

    pub fn from_tensor(t: &TensorElement) -> Result<Self> {
        t.require_order(2)?;
        Self::from_f64(t.dim(), t.coeffs())
    }

    /// Automorphism matrix (entry `(i, j)` is the `i`-th coordinate of `σ(x_j)`).
    pub fn from_automorphism(s: &Automorphism) -> Result<Self> {
        let m = s.matrix();
        let n = m.nrows();
        let flat: Vec<f64> = (0..n * n).map(|r| m[(r / n, r % n)]).collect();
        Self::from_f64(n, &flat)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigRational::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigRational::one();
        }
        ExactMatrix { n, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    pub fn mul(&self, o: &ExactMatrix) -> ExactMatrix {
        let n = self.n;
        let mut data = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        data[i * n + j] += a * b;
                    }
                }
            }
        }
        ExactMatrix { n, data }
    }

    pub fn sub(&self, o: &ExactMatrix) -> ExactMatrix {
        ExactMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn add(&self, o: &ExactMatrix) -> ExactMatrix {
        ExactMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: &BigRational) -> ExactMatrix {
        ExactMatrix { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn transpose(&self) -> ExactMatrix {
        let n = self.n;
        let mut data = self.data.clone();
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j).clone();
            }
        }
        ExactMatrix { n, data }
    }

    /// Gauss–Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = ExactMatrix::identity(n).data;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero())?;
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                    inv.swap(pivot * n + c, col * n + c);
                }
            }
            let p = a[col * n + col].clone();
            for c in 0..n {
                a[col * n + c] = &a[col * n + c] / &p;
                inv[col * n + c] = &inv[col * n + c] / &p;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].clone();
                for c in 0..n {
                    let (ac, ic) = (a[col * n + c].clone(), inv[col * n + c].clone());
                    a[r * n + c] -= &f * ac;
                    inv[r * n + c] -= &f * ic;
                }
            }
        }
        Some(ExactMatrix { n, data: inv })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

/// Exact `C_σ(r) = (σ−1) R (σ−1)ᵀ` in coefficient form.
pub fn cre_defect_exact(r: &ExactMatrix, sigma: &ExactMatrix) -> ExactMatrix {
    let s1 = sigma.sub(&ExactMatrix::identity(sigma.n));
    s1.mul(r).mul(&s1.transpose())
}

/// Exact standard r-matrix `½(B⁻¹ + r̂)` for an algebra with rational trace form.
pub fn standard_r_exact(alg: &LieAlgebraData, skew: &TensorElement) -> Result<ExactMatrix> {
    let d = alg.dim();
    let b = alg.trace_form();
    let flat: Vec<f64> = (0..d * d).map(|r| b[(r / d, r % d)]).collect();
    let binv = ExactMatrix::from_f64(d, &flat)?
        .inverse()
        .ok_or(Error::Degenerate(0.0))?;
    let half = BigRational::new(1.into(), 2.into());
    Ok(binv.add(&ExactMatrix::from_tensor(skew)?).scale(&half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::algebra::sl;
    use crate::lie::presets::{cartan_involution, skew_r_matrix};

    #[test]
    fn rational_jacobi_and_cre() {
        for n in 2..=4 {
            let g = sl(n).unwrap();
            let ex = ExactAlgebra::from_algebra(&g).unwrap();
            assert!(ex.jacobi_holds());
            let r = ExactMatrix::from_tensor(&skew_r_matrix(&g).unwrap()).unwrap();
            let th = ExactMatrix::from_automorphism(&cartan_involution(&g).unwrap()).unwrap();
            assert!(cre_defect_exact(&r, &th).is_zero());
        }
    }

    #[test]
    fn exact_standard_r_solves_cybe() {
        for n in 2..=3 {
            let g = sl(n).unwrap();
            let ex = ExactAlgebra::from_algebra(&g).unwrap();
            let r = standard_r_exact(&g, &skew_r_matrix(&g).unwrap()).unwrap();
            assert!(ex.cybe_defect(&r).iter().all(Zero::is_zero));
            let skew = ExactMatrix::from_tensor(&skew_r_matrix(&g).unwrap()).unwrap();
            assert!(!ex.cybe_defect(&skew).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = ExactMatrix::from_f64(3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), ExactMatrix::identity(3));
        let singular = ExactMatrix::from_f64(2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(singular.inverse().is_none());
    }
}
