//! Bundled algebras, automorphisms and r-matrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lie::algebra::{direct_sum_square, elementary, gl2, sl, LieAlgebraData};
use crate::lie::defects::casimir;
use crate::lie::tensor::{Automorphism, TensorElement};

const AUT_TOL: f64 = 1e-10;

/// Names accepted by [`algebra`], in listing order.
pub const ALGEBRA_PRESETS: &[&str] = &["sl2", "sl3", "sl4", "sl5", "gl2", "sl2+sl2"];

/// Names accepted by [`automorphism`], in listing order.
pub const AUTOMORPHISM_PRESETS: &[&str] = &["identity", "cartan", "swap", "diagram", "cyclic3"];

pub fn algebra(name: &str) -> Result<LieAlgebraData> {
    match name {
        "sl2" => sl(2),
        "sl3" => sl(3),
        "sl4" => sl(4),
        "sl5" => sl(5),
        "gl2" => gl2(),
        "sl2+sl2" => direct_sum_square(&sl(2)?),
        other => Err(Error::Input(format!("unknown algebra preset '{other}'"))),
    }
}

pub fn automorphism(alg: &LieAlgebraData, name: &str) -> Result<Automorphism> {
    match name {
        "identity" => Ok(Automorphism::identity(alg)),
        "cartan" => cartan_involution(alg),
        "swap" => swap_involution(alg),
        "diagram" => diagram_involution(alg),
        "cyclic3" => cyclic_inner(alg),
        other => Err(Error::Input(format!("unknown automorphism preset '{other}'"))),
    }
}

fn rep_size(alg: &LieAlgebraData) -> Result<usize> {
    alg.matrix_rep()
        .map(|r| r[0].nrows())
        .ok_or_else(|| Error::Unsupported(format!("{} has no matrix representation", alg.name())))
}

/// Cartan involution `θ(X) = −Xᵀ`.
pub fn cartan_involution(alg: &LieAlgebraData) -> Result<Automorphism> {
    Automorphism::from_matrix_map(alg, "cartan", |x| -x.transpose(), Some(2), AUT_TOL)
}

/// Swap of the two summands of a block-diagonal `g ⊕ g`.
pub fn swap_involution(alg: &LieAlgebraData) -> Result<Automorphism> {
    let d = alg.dim();
    if !d.is_multiple_of(2) {
        return Err(Error::Unsupported(format!("{} is not a doubled algebra", alg.name())));
    }
    let h = d / 2;
    let m = DMatrix::from_fn(d, d, |i, j| if (i + h) % d == j { 1.0 } else { 0.0 });
    Automorphism::new(alg, "swap", m, Some(2), AUT_TOL)
}

/// Outer involution `X ↦ −J Xᵀ J⁻¹` with `J` the signed antidiagonal.
pub fn diagram_involution(alg: &LieAlgebraData) -> Result<Automorphism> {
    let n = rep_size(alg)?;
    let j = DMatrix::from_fn(n, n, |r, c| {
        if r + c == n - 1 {
            if r % 2 == 0 { 1.0 } else { -1.0 }
        } else {
            0.0
        }
    });
    let jinv = j.clone().try_inverse().expect("antidiagonal sign matrix is invertible");
    let sigma = Automorphism::from_matrix_map(alg, "diagram", |x| -(&j * x.transpose() * &jinv), None, AUT_TOL)?;
    let order = sigma.finite_order(4, AUT_TOL);
    Automorphism::new(alg, "diagram", sigma.matrix().clone(), order, AUT_TOL)
}

/// Inner automorphism `Ad_P` for the cyclic shift permutation `P` (order = rep size).
pub fn cyclic_inner(alg: &LieAlgebraData) -> Result<Automorphism> {
    let n = rep_size(alg)?;
    let p = DMatrix::from_fn(n, n, |r, c| if (r + 1) % n == c { 1.0 } else { 0.0 });
    let pt = p.transpose();
    Automorphism::from_matrix_map(alg, "cyclic3", |x| &p * x * &pt, Some(n as u32), AUT_TOL)
}

/// Skew r-matrix `r̂ = Σ_{i<j} e_ij ∧ e_ji` (wedge without ½), i.e. `Σ_{α>0} E_α ∧ F_α`.
pub fn skew_r_matrix(alg: &LieAlgebraData) -> Result<TensorElement> {
    let n = rep_size(alg)?;
    let mut r = TensorElement::zeros(alg.dim(), 2);
    for i in 0..n {
        for j in i + 1..n {
            let e = alg.coords_of_matrix(&elementary(n, i, j))?;
            let f = alg.coords_of_matrix(&elementary(n, j, i))?;
            r.add_assign(&TensorElement::wedge(&e, &f));
        }
    }
    Ok(r)
}

/// Quasitriangular standard r-matrix `r̃ = ½(Ω + r̂)`; on `sl_2` this is `E⊗F + ¼H⊗H`.
pub fn standard_r_matrix(alg: &LieAlgebraData) -> Result<TensorElement> {
    let mut r = casimir(alg)?;
    r.add_assign(&skew_r_matrix(alg)?);
    Ok(r.scaled(0.5))
}

/// r-matrix of the double `g ⊕ g`: `r_d = Σ_i (x_i, x_i) ⊗ (r_+(ξ_i), r_−(ξ_i))`
/// with `r_+(ξ) = ⟨ξ⊗1, r⟩`, `r_−(ξ) = −⟨ξ⊗1, r_21⟩`.
pub fn double_r_matrix(r: &TensorElement) -> Result<TensorElement> {
    let m = r.as_matrix()?;
    let d = m.nrows();
    let mut out = DMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        for b in 0..d {
            let plus = m[(i, b)];
            let minus = -m[(b, i)];
            for leg in [i, i + d] {
                out[(leg, b)] += plus;
                out[(leg, b + d)] += minus;
            }
        }
    }
    Ok(TensorElement::from_matrix(&out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_build() {
        for name in ALGEBRA_PRESETS {
            algebra(name).unwrap();
        }
        let sl3 = algebra("sl3").unwrap();
        for name in ["identity", "cartan", "diagram", "cyclic3"] {
            automorphism(&sl3, name).unwrap();
        }
        let dd = algebra("sl2+sl2").unwrap();
        automorphism(&dd, "swap").unwrap();
    }

    #[test]
    fn orders() {
        let sl3 = algebra("sl3").unwrap();
        assert_eq!(cartan_involution(&sl3).unwrap().order_hint(), Some(2));
        assert_eq!(cyclic_inner(&sl3).unwrap().order_hint(), Some(3));
        assert_eq!(diagram_involution(&sl3).unwrap().order_hint(), Some(2));
    }

    #[test]
    fn cartan_on_sl2_swaps_e_and_f() {
        let g = algebra("sl2").unwrap();
        let th = cartan_involution(&g).unwrap();
        assert_eq!(th.apply(&[1.0, 0.0, 0.0]), vec![0.0, 0.0, -1.0]);
        assert_eq!(th.apply(&[0.0, 1.0, 0.0]), vec![0.0, -1.0, 0.0]);
    }

    #[test]
    fn swap_rejects_odd_dimension() {
        let g = algebra("sl2").unwrap();
        assert!(swap_involution(&g).is_err());
    }
}
