//! Cobracket and the defect functionals of the classical Yang–Baxter,
//! modified Yang–Baxter and reflection equations.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lie::algebra::LieAlgebraData;
use crate::lie::tensor::{Automorphism, SubalgebraBasis, TensorElement};

fn check_vec(alg: &LieAlgebraData, x: &[f64]) -> Result<()> {
    if x.len() != alg.dim() {
        return Err(Error::Dimension { expected: alg.dim(), got: x.len() });
    }
    Ok(())
}

/// `(ad_x ⊗ 1 + 1 ⊗ ad_x) t` for an order-2 tensor.
pub fn ad_action(alg: &LieAlgebraData, t: &TensorElement, x: &[f64]) -> Result<TensorElement> {
    t.require_order(2)?;
    t.require_dim(alg.dim())?;
    let a = alg.ad(x)?;
    let m = t.as_matrix()?;
    Ok(TensorElement::from_matrix(&(&a * &m + &m * a.transpose())))
}

/// Coboundary cobracket `δ(x) = x · r`.
pub fn cobracket(alg: &LieAlgebraData, r: &TensorElement, x: &[f64]) -> Result<TensorElement> {
    ad_action(alg, r, x)
}

/// `C_σ(r) = (σ⊗σ)r + r − (σ⊗1)r − (1⊗σ)r`, computed as `(σ−1)⊗(σ−1) r`.
pub fn cre_defect(alg: &LieAlgebraData, r: &TensorElement, sigma: &Automorphism) -> Result<TensorElement> {
    r.require_order(2)?;
    r.require_dim(alg.dim())?;
    if sigma.dim() != alg.dim() {
        return Err(Error::Dimension { expected: alg.dim(), got: sigma.dim() });
    }
    let s = sigma.matrix();
    let m = r.as_matrix()?;
    // expanded form, matching the four-term definition literally
    let out = s * &m * s.transpose() + &m - s * &m - &m * s.transpose();
    Ok(TensorElement::from_matrix(&out))
}

/// `[[r, r]] = [r12, r13] + [r13, r23] + [r12, r23]` as an order-3 tensor.
pub fn cybe_defect(alg: &LieAlgebraData, r: &TensorElement) -> Result<TensorElement> {
    r.require_order(2)?;
    r.require_dim(alg.dim())?;
    let d = alg.dim();
    let mut out = TensorElement::zeros(d, 3);
    let rr = r.as_matrix()?;
    let o = out.coeffs_mut();
    let idx = |a: usize, b: usize, c: usize| (a * d + b) * d + c;
    for &(i, j, e, c) in alg.nonzero_constants() {
        // [r12, r13]: Σ r^{ib} r^{jd} [x_i, x_j] ⊗ x_b ⊗ x_d
        for b in 0..d {
            let rib = rr[(i, b)];
            if rib == 0.0 {
                continue;
            }
            for dd in 0..d {
                o[idx(e, b, dd)] += c * rib * rr[(j, dd)];
            }
        }
        // [r13, r23]: Σ r^{a i} r^{b j} x_a ⊗ x_b ⊗ [x_i, x_j]
        for a in 0..d {
            let rai = rr[(a, i)];
            if rai == 0.0 {
                continue;
            }
            for b in 0..d {
                o[idx(a, b, e)] += c * rai * rr[(b, j)];
            }
        }
        // [r12, r23]: Σ r^{a i} r^{j d} x_a ⊗ [x_i, x_j] ⊗ x_d
        for a in 0..d {
            let rai = rr[(a, i)];
            if rai == 0.0 {
                continue;
            }
            for dd in 0..d {
                o[idx(a, e, dd)] += c * rai * rr[(j, dd)];
            }
        }
    }
    Ok(out)
}

/// Matrix of `ξ ↦ ⟨ξ ⊗ 1, t⟩` after identifying `g* ≅ g` through the trace form.
pub fn operator_form(alg: &LieAlgebraData, t: &TensorElement) -> Result<DMatrix<f64>> {
    t.require_order(2)?;
    t.require_dim(alg.dim())?;
    alg.trace_form_inverse()?;
    Ok(t.as_matrix()?.transpose() * alg.trace_form())
}

/// `[r̂x, r̂y] − r̂([r̂x, y] + [x, r̂y]) + [Jx, Jy]` with `r̂`, `J` the skew and
/// symmetric parts of `r` taken as operators.
pub fn mcybe_defect(alg: &LieAlgebraData, r: &TensorElement, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    check_vec(alg, x)?;
    check_vec(alg, y)?;
    let skew = operator_form(alg, &r.skew_part()?)?;
    let sym = operator_form(alg, &r.symmetric_part()?)?;
    let xv = DVector::from_column_slice(x);
    let yv = DVector::from_column_slice(y);
    let rx = &skew * &xv;
    let ry = &skew * &yv;
    let jx = &sym * &xv;
    let jy = &sym * &yv;
    let lhs = DVector::from_vec(alg.bracket(rx.as_slice(), ry.as_slice())?);
    let a = DVector::from_vec(alg.bracket(rx.as_slice(), y)?);
    let b = DVector::from_vec(alg.bracket(x, ry.as_slice())?);
    let inner = &skew * (a + b);
    let jj = DVector::from_vec(alg.bracket(jx.as_slice(), jy.as_slice())?);
    Ok((lhs - inner + jj).as_slice().to_vec())
}

/// `max_x ‖(ad_x ⊗ 1 + 1 ⊗ ad_x) C‖` over the basis vectors of `sub`.
pub fn invariance_defect(alg: &LieAlgebraData, c: &TensorElement, sub: &SubalgebraBasis) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for v in &sub.vectors {
        worst = worst.max(ad_action(alg, c, v)?.norm());
    }
    Ok(worst)
}

/// Casimir tensor `Σ (B⁻¹)^{ab} x_a ⊗ x_b` of the trace form.
pub fn casimir(alg: &LieAlgebraData) -> Result<TensorElement> {
    Ok(TensorElement::from_matrix(&alg.trace_form_inverse()?))
}
