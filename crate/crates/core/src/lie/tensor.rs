use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lie::algebra::LieAlgebraData;

/// Order-2 or order-3 tensor over a Lie algebra, stored densely in basis
/// coordinates with the first leg slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorElement {
    dim: usize,
    order: usize,
    coeffs: Vec<f64>,
}

impl TensorElement {
    pub fn zeros(dim: usize, order: usize) -> Self {
        TensorElement { dim, order, coeffs: vec![0.0; dim.pow(order as u32)] }
    }

    pub fn from_coeffs(dim: usize, order: usize, coeffs: Vec<f64>) -> Result<Self> {
        if !(order == 2 || order == 3) {
            return Err(Error::Input(format!("tensor order must be 2 or 3, got {order}")));
        }
        let expected = dim.pow(order as u32);
        if coeffs.len() != expected {
            return Err(Error::Dimension { expected, got: coeffs.len() });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Input("tensor has non-finite coefficients".into()));
        }
        Ok(TensorElement { dim, order, coeffs })
    }

    /// Order-2 tensor `Σ m_ab x_a ⊗ x_b`.
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let d = m.nrows();
        assert_eq!(d, m.ncols(), "coefficient matrix must be square");
        let coeffs = (0..d * d).map(|r| m[(r / d, r % d)]).collect();
        TensorElement { dim: d, order: 2, coeffs }
    }

    /// `x ⊗ y`.
    pub fn outer(x: &[f64], y: &[f64]) -> Self {
        let d = x.len();
        let mut coeffs = vec![0.0; d * d];
        for a in 0..d {
            for b in 0..d {
                coeffs[a * d + b] = x[a] * y[b];
            }
        }
        TensorElement { dim: d, order: 2, coeffs }
    }

    /// `x ∧ y = x ⊗ y − y ⊗ x` (no factor ½).
    pub fn wedge(x: &[f64], y: &[f64]) -> Self {
        let mut t = Self::outer(x, y);
        t.sub_assign(&Self::outer(y, x));
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn get2(&self, a: usize, b: usize) -> f64 {
        debug_assert_eq!(self.order, 2);
        self.coeffs[a * self.dim + b]
    }

    pub fn get3(&self, a: usize, b: usize, c: usize) -> f64 {
        debug_assert_eq!(self.order, 3);
        self.coeffs[(a * self.dim + b) * self.dim + c]
    }

    pub fn require_order(&self, order: usize) -> Result<()> {
        if self.order != order {
            return Err(Error::Order { expected: order, got: self.order });
        }
        Ok(())
    }

    pub fn require_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::Dimension { expected: dim, got: self.dim });
        }
        Ok(())
    }

    /// Coefficient matrix of an order-2 tensor (row = first leg).
    pub fn as_matrix(&self) -> Result<DMatrix<f64>> {
        self.require_order(2)?;
        Ok(DMatrix::from_row_slice(self.dim, self.dim, &self.coeffs))
    }

    /// Max-abs norm.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Leg swap `t_21` of an order-2 tensor.
    pub fn flip(&self) -> Result<Self> {
        Ok(Self::from_matrix(&self.as_matrix()?.transpose()))
    }

    /// Symmetric part `½(t + t_21)`.
    pub fn symmetric_part(&self) -> Result<Self> {
        let m = self.as_matrix()?;
        Ok(Self::from_matrix(&((&m + m.transpose()) * 0.5)))
    }

    /// Skew part `½(t − t_21)`.
    pub fn skew_part(&self) -> Result<Self> {
        let m = self.as_matrix()?;
        Ok(Self::from_matrix(&((&m - m.transpose()) * 0.5)))
    }

    pub fn scaled(&self, a: f64) -> Self {
        TensorElement { dim: self.dim, order: self.order, coeffs: self.coeffs.iter().map(|c| c * a).collect() }
    }

    pub fn add_assign(&mut self, o: &TensorElement) {
        assert_eq!(self.coeffs.len(), o.coeffs.len(), "tensor shapes differ");
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, o: &TensorElement) {
        assert_eq!(self.coeffs.len(), o.coeffs.len(), "tensor shapes differ");
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a -= b;
        }
    }

    pub fn plus(&self, o: &TensorElement) -> Self {
        let mut t = self.clone();
        t.add_assign(o);
        t
    }

    pub fn minus(&self, o: &TensorElement) -> Self {
        let mut t = self.clone();
        t.sub_assign(o);
        t
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }
}

/// Linear automorphism `σ` of a Lie algebra; column `j` of `matrix` holds `σ(x_j)`.
#[derive(Debug, Clone)]
pub struct Automorphism {
    label: String,
    matrix: DMatrix<f64>,
    order_hint: Option<u32>,
}

impl Automorphism {
    /// Validates invertibility, the homomorphism property and `order_hint` at `tol`.
    pub fn new(
        alg: &LieAlgebraData,
        label: impl Into<String>,
        matrix: DMatrix<f64>,
        order_hint: Option<u32>,
        tol: f64,
    ) -> Result<Self> {
        let d = alg.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::Dimension { expected: d, got: matrix.nrows() });
        }
        let sigma = Automorphism { label: label.into(), matrix, order_hint };
        let sv = sigma.matrix.clone().singular_values();
        if sv.min() <= 1e-12 * sv.max() {
            return Err(Error::Input(format!("{} is not invertible", sigma.label)));
        }
        let defect = sigma.homomorphism_defect(alg)?;
        if defect > tol {
            return Err(Error::Input(format!(
                "{} is not a Lie algebra automorphism (defect {defect:e})",
                sigma.label
            )));
        }
        if let Some(m) = order_hint {
            if m == 0 {
                return Err(Error::Input("order hint must be positive".into()));
            }
            let dev = (sigma.power(m) - DMatrix::identity(d, d)).amax();
            if dev > tol {
                return Err(Error::Input(format!(
                    "{}^{m} differs from the identity by {dev:e}",
                    sigma.label
                )));
            }
        }
        Ok(sigma)
    }

    /// Automorphism induced by a map on the matrix representation.
    pub fn from_matrix_map(
        alg: &LieAlgebraData,
        label: impl Into<String>,
        f: impl Fn(&DMatrix<f64>) -> DMatrix<f64>,
        order_hint: Option<u32>,
        tol: f64,
    ) -> Result<Self> {
        let rep = alg
            .matrix_rep()
            .ok_or_else(|| Error::Unsupported(format!("{} has no matrix representation", alg.name())))?;
        let d = alg.dim();
        let mut m = DMatrix::zeros(d, d);
        for (j, x) in rep.iter().enumerate() {
            let coords = alg.coords_of_matrix(&f(x))?;
            for i in 0..d {
                m[(i, j)] = coords[i];
            }
        }
        Automorphism::new(alg, label, m, order_hint, tol)
    }

    pub fn identity(alg: &LieAlgebraData) -> Self {
        Automorphism { label: "identity".into(), matrix: DMatrix::identity(alg.dim(), alg.dim()), order_hint: Some(1) }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn order_hint(&self) -> Option<u32> {
        self.order_hint
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let v = &self.matrix * nalgebra::DVector::from_column_slice(x);
        v.as_slice().to_vec()
    }

    pub fn power(&self, m: u32) -> DMatrix<f64> {
        let d = self.dim();
        let mut acc = DMatrix::identity(d, d);
        for _ in 0..m {
            acc = &self.matrix * acc;
        }
        acc
    }

    /// Max-abs of `σ[x_i, x_j] − [σx_i, σx_j]` over basis pairs.
    pub fn homomorphism_defect(&self, alg: &LieAlgebraData) -> Result<f64> {
        let d = alg.dim();
        let mut worst: f64 = 0.0;
        let cols: Vec<Vec<f64>> = (0..d).map(|j| self.matrix.column(j).iter().copied().collect()).collect();
        for i in 0..d {
            for j in 0..d {
                let lhs = self.apply(&alg.bracket(alg.basis_vector(i).as_slice(), alg.basis_vector(j).as_slice())?);
                let rhs = alg.bracket(&cols[i], &cols[j])?;
                for k in 0..d {
                    worst = worst.max((lhs[k] - rhs[k]).abs());
                }
            }
        }
        Ok(worst)
    }

    /// Smallest `m ≤ max_order` with `σ^m = 1` to `tol`, using the hint when present.
    pub fn finite_order(&self, max_order: u32, tol: f64) -> Option<u32> {
        if let Some(m) = self.order_hint {
            return Some(m);
        }
        let d = self.dim();
        let id = DMatrix::identity(d, d);
        let mut acc = id.clone();
        for m in 1..=max_order {
            acc = &self.matrix * acc;
            if (&acc - &id).amax() <= tol {
                return Some(m);
            }
        }
        None
    }
}

/// Linearly independent vectors spanning a subspace of the algebra.
#[derive(Debug, Clone)]
pub struct SubalgebraBasis {
    pub label: String,
    pub vectors: Vec<Vec<f64>>,
}

impl SubalgebraBasis {
    pub fn new(label: impl Into<String>, vectors: Vec<Vec<f64>>) -> Result<Self> {
        let s = SubalgebraBasis { label: label.into(), vectors };
        if let Some(first) = s.vectors.first() {
            let d = first.len();
            if s.vectors.iter().any(|v| v.len() != d) {
                return Err(Error::Input("subspace vectors have different lengths".into()));
            }
            if s.rank(1e-10) != s.vectors.len() {
                return Err(Error::Input(format!("{}: vectors are linearly dependent", s.label)));
            }
        }
        Ok(s)
    }

    /// Whole algebra, standard basis.
    pub fn full(alg: &LieAlgebraData) -> Self {
        SubalgebraBasis {
            label: alg.name().to_string(),
            vectors: (0..alg.dim()).map(|i| alg.basis_vector(i).as_slice().to_vec()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    fn as_columns(&self) -> Option<DMatrix<f64>> {
        let d = self.vectors.first()?.len();
        Some(DMatrix::from_fn(d, self.vectors.len(), |r, c| self.vectors[c][r]))
    }

    fn rank(&self, tol: f64) -> usize {
        match self.as_columns() {
            None => 0,
            Some(m) => {
                let sv = m.singular_values();
                let max = sv.max();
                sv.iter().filter(|&&s| s > tol * max.max(1e-300)).count()
            }
        }
    }

    /// Distance of `v` from the span (max-abs of the least-squares residual).
    pub fn distance(&self, v: &[f64]) -> f64 {
        let rhs = nalgebra::DVector::from_column_slice(v);
        match self.as_columns() {
            None => rhs.amax(),
            Some(m) => {
                let svd = m.clone().svd(true, true);
                match svd.solve(&rhs, 1e-14) {
                    Ok(x) => (&m * x - rhs).amax(),
                    Err(_) => f64::INFINITY,
                }
            }
        }
    }

    /// Max distance of `[v_i, v_j]` from the span.
    pub fn closure_defect(&self, alg: &LieAlgebraData) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for a in &self.vectors {
            for b in &self.vectors {
                worst = worst.max(self.distance(&alg.bracket(a, b)?));
            }
        }
        Ok(worst)
    }
}
