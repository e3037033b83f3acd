//! Finite-dimensional real Lie algebras given by structure constants.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Explicit Lie algebra: basis labels, structure constants `[x_i, x_j] = Σ_k c[i][j][k] x_k`,
/// an invariant symmetric form and (optionally) a faithful matrix representation.
#[derive(Debug, Clone)]
pub struct LieAlgebraData {
    name: String,
    dim: usize,
    basis_labels: Vec<String>,
    /// Flat `dim³` array, index `(i * dim + j) * dim + k`.
    structure_constants: Vec<f64>,
    /// Nonzero entries `(i, j, k, c)` of the structure constants.
    sparse: Vec<(usize, usize, usize, f64)>,
    trace_form: DMatrix<f64>,
    matrix_rep: Option<Vec<DMatrix<f64>>>,
}

impl LieAlgebraData {
    /// Build from raw structure constants; the trace form defaults to the
    /// trace form of `matrix_rep` when given, and to the Killing form otherwise.
    pub fn new(
        name: impl Into<String>,
        basis_labels: Vec<String>,
        structure_constants: Vec<f64>,
        trace_form: Option<DMatrix<f64>>,
        matrix_rep: Option<Vec<DMatrix<f64>>>,
    ) -> Result<Self> {
        let dim = basis_labels.len();
        if dim == 0 {
            return Err(Error::Input("algebra must have positive dimension".into()));
        }
        if structure_constants.len() != dim * dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim * dim,
                got: structure_constants.len(),
            });
        }
        if structure_constants.iter().any(|c| !c.is_finite()) {
            return Err(Error::Input("non-finite structure constant".into()));
        }
        if let Some(rep) = &matrix_rep {
            if rep.len() != dim {
                return Err(Error::Dimension { expected: dim, got: rep.len() });
            }
            let n = rep[0].nrows();
            if rep.iter().any(|m| m.nrows() != n || m.ncols() != n) {
                return Err(Error::Input("representation matrices must be square and of equal size".into()));
            }
        }
        let sparse = sparse_of(dim, &structure_constants);
        let mut alg = LieAlgebraData {
            name: name.into(),
            dim,
            basis_labels,
            structure_constants,
            sparse,
            trace_form: DMatrix::zeros(dim, dim),
            matrix_rep,
        };
        alg.trace_form = match trace_form {
            Some(b) => {
                if b.nrows() != dim || b.ncols() != dim {
                    return Err(Error::Dimension { expected: dim, got: b.nrows() });
                }
                b
            }
            None => match &alg.matrix_rep {
                Some(rep) => DMatrix::from_fn(dim, dim, |i, j| (&rep[i] * &rep[j]).trace()),
                None => alg.killing_form(),
            },
        };
        Ok(alg)
    }

    /// Structure constants from a basis of matrices closed under the commutator.
    pub fn from_matrices(
        name: impl Into<String>,
        basis_labels: Vec<String>,
        basis: Vec<DMatrix<f64>>,
    ) -> Result<Self> {
        let dim = basis.len();
        if basis_labels.len() != dim {
            return Err(Error::Dimension { expected: dim, got: basis_labels.len() });
        }
        let solver = MatrixCoordinates::new(&basis)?;
        let mut c = vec![0.0; dim * dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let comm = &basis[i] * &basis[j] - &basis[j] * &basis[i];
                let coords = solver.coords(&comm)?;
                for k in 0..dim {
                    c[(i * dim + j) * dim + k] = coords[k];
                }
            }
        }
        LieAlgebraData::new(name, basis_labels, c, None, Some(basis))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis_labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.structure_constants[(i * self.dim + j) * self.dim + k]
    }

    pub fn structure_constants(&self) -> &[f64] {
        &self.structure_constants
    }

    /// Nonzero structure constants as `(i, j, k, c_ij^k)`.
    pub fn nonzero_constants(&self) -> &[(usize, usize, usize, f64)] {
        &self.sparse
    }

    pub fn trace_form(&self) -> &DMatrix<f64> {
        &self.trace_form
    }

    pub fn matrix_rep(&self) -> Option<&[DMatrix<f64>]> {
        self.matrix_rep.as_deref()
    }

    /// Basis vector `x_i` in coordinates.
    pub fn basis_vector(&self, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim);
        v[i] = 1.0;
        v
    }

    /// `[x, y]` in basis coordinates.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        let mut out = vec![0.0; self.dim];
        for &(i, j, k, c) in &self.sparse {
            out[k] += c * x[i] * y[j];
        }
        Ok(out)
    }

    /// Matrix of `ad_x` acting on coordinates: `(ad_x)_{kb} = Σ_i x_i c[i][b][k]`.
    pub fn ad(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check_len(x.len())?;
        let mut a = DMatrix::zeros(self.dim, self.dim);
        for &(i, b, k, c) in &self.sparse {
            a[(k, b)] += x[i] * c;
        }
        Ok(a)
    }

    /// `tr(ad x_i ad x_j)`.
    pub fn killing_form(&self) -> DMatrix<f64> {
        let ads: Vec<DMatrix<f64>> = (0..self.dim)
            .map(|i| self.ad(self.basis_vector(i).as_slice()).expect("basis vector has length dim"))
            .collect();
        DMatrix::from_fn(self.dim, self.dim, |i, j| (&ads[i] * &ads[j]).trace())
    }

    /// Image of a coordinate vector in the matrix representation.
    pub fn to_matrix(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check_len(x.len())?;
        let rep = self
            .matrix_rep
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("{} has no matrix representation", self.name)))?;
        let n = rep[0].nrows();
        let mut m = DMatrix::zeros(n, n);
        for (xi, b) in x.iter().zip(rep) {
            if *xi != 0.0 {
                m += b * *xi;
            }
        }
        Ok(m)
    }

    /// Coordinates of a matrix in the span of the representation basis.
    pub fn coords_of_matrix(&self, m: &DMatrix<f64>) -> Result<Vec<f64>> {
        let rep = self
            .matrix_rep
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("{} has no matrix representation", self.name)))?;
        MatrixCoordinates::new(rep)?.coords(m).map(|v| v.as_slice().to_vec())
    }

    /// `max |c[i][j][k] + c[j][i][k]|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    worst = worst.max((self.c(i, j, k) + self.c(j, i, k)).abs());
                }
            }
        }
        worst
    }

    /// Max-abs cyclic sum `Σ_m c_ij^m c_mk^l + c_jk^m c_mi^l + c_ki^m c_mj^l`.
    pub fn jacobi_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut s = 0.0;
                        for m in 0..d {
                            s += self.c(i, j, m) * self.c(m, k, l)
                                + self.c(j, k, m) * self.c(m, i, l)
                                + self.c(k, i, m) * self.c(m, j, l);
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Max-abs of `B([x_i,x_j],x_k) + B(x_j,[x_i,x_k])` and of `B - Bᵀ`.
    pub fn form_invariance_defect(&self) -> f64 {
        let d = self.dim;
        let b = &self.trace_form;
        let mut worst = (b - b.transpose()).amax();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let mut s = 0.0;
                    for m in 0..d {
                        s += self.c(i, j, m) * b[(m, k)] + self.c(i, k, m) * b[(j, m)];
                    }
                    worst = worst.max(s.abs());
                }
            }
        }
        worst
    }

    /// Max-abs difference between matrix commutators and the structure constants.
    pub fn representation_defect(&self) -> Option<f64> {
        let rep = self.matrix_rep.as_ref()?;
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let comm = &rep[i] * &rep[j] - &rep[j] * &rep[i];
                let mut expected = comm.clone() * 0.0;
                for (k, rk) in rep.iter().enumerate() {
                    let c = self.c(i, j, k);
                    if c != 0.0 {
                        expected += rk * c;
                    }
                }
                worst = worst.max((comm - expected).amax());
            }
        }
        Some(worst)
    }

    /// Runs every structural check, failing on the first one above `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let checks = [
            ("antisymmetry", self.antisymmetry_defect()),
            ("jacobi", self.jacobi_defect()),
            ("trace form invariance", self.form_invariance_defect()),
            ("matrix representation", self.representation_defect().unwrap_or(0.0)),
        ];
        for (name, defect) in checks {
            if !(defect <= tol) {
                return Err(Error::Input(format!(
                    "{}: {name} defect {defect:e} exceeds {tol:e}",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// Smallest singular value of the trace form relative to the largest.
    pub fn form_conditioning(&self) -> f64 {
        let sv = self.trace_form.clone().singular_values();
        let max = sv.max();
        if max == 0.0 {
            0.0
        } else {
            sv.min() / max
        }
    }

    /// Inverse of the trace form, failing if it is degenerate.
    pub fn trace_form_inverse(&self) -> Result<DMatrix<f64>> {
        let cond = self.form_conditioning();
        if cond < 1e-12 {
            return Err(Error::Degenerate(cond));
        }
        self.trace_form
            .clone()
            .try_inverse()
            .ok_or(Error::Degenerate(cond))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: len });
        }
        Ok(())
    }
}

fn sparse_of(dim: usize, c: &[f64]) -> Vec<(usize, usize, usize, f64)> {
    let mut out = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let v = c[(i * dim + j) * dim + k];
                if v != 0.0 {
                    out.push((i, j, k, v));
                }
            }
        }
    }
    out
}

/// Least-squares coordinates of matrices in a fixed linearly independent basis.
struct MatrixCoordinates {
    basis: DMatrix<f64>,
    svd: nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl MatrixCoordinates {
    fn new(basis: &[DMatrix<f64>]) -> Result<Self> {
        let n = basis[0].nrows();
        let cols = basis.len();
        let flat = DMatrix::from_fn(n * n, cols, |r, c| basis[c][(r / n, r % n)]);
        let svd = flat.clone().svd(true, true);
        let sv = &svd.singular_values;
        if sv.min() <= 1e-12 * sv.max() {
            return Err(Error::Input("representation matrices are linearly dependent".into()));
        }
        Ok(MatrixCoordinates { basis: flat, svd })
    }

    fn coords(&self, m: &DMatrix<f64>) -> Result<DVector<f64>> {
        let n = m.nrows();
        let rhs = DVector::from_fn(n * n, |r, _| m[(r / n, r % n)]);
        let x = self
            .svd
            .solve(&rhs, 1e-14)
            .map_err(|e| Error::Numerical(e.to_string()))?;
        let resid = (&self.basis * &x - &rhs).amax();
        if resid > 1e-9 * rhs.amax().max(1.0) {
            return Err(Error::Input(format!(
                "matrix is not in the span of the basis (residual {resid:e})"
            )));
        }
        Ok(x.map(snap_dyadic))
    }
}

/// Removes least-squares rounding noise from coordinates that are small dyadic rationals.
fn snap_dyadic(v: f64) -> f64 {
    let s = (v * 64.0).round() / 64.0;
    if (v - s).abs() < 1e-12 {
        s
    } else {
        v
    }
}

/// On-disk algebra definition (TOML).
///
/// `structure_constants` lists `[i, j, k, value]` meaning `c[i][j][k] = value`;
/// the antisymmetric partner `c[j][i][k] = -value` is implied. Matrices are
/// row-major flat arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub dim: usize,
    pub basis_labels: Vec<String>,
    pub structure_constants: Vec<(usize, usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_form: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_rep: Option<Vec<Vec<f64>>>,
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_algebra(alg: &LieAlgebraData) -> Self {
        let structure_constants = alg
            .nonzero_constants()
            .iter()
            .filter(|(i, j, _, _)| i < j)
            .copied()
            .collect();
        let d = alg.dim();
        AlgebraFile {
            name: alg.name().to_string(),
            dim: d,
            basis_labels: alg.basis_labels().to_vec(),
            structure_constants,
            trace_form: Some((0..d * d).map(|r| alg.trace_form()[(r / d, r % d)]).collect()),
            matrix_rep: alg.matrix_rep().map(|rep| {
                rep.iter()
                    .map(|m| {
                        let n = m.nrows();
                        (0..n * n).map(|r| m[(r / n, r % n)]).collect()
                    })
                    .collect()
            }),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("algebra file serializes")
    }

    /// Build and validate the algebra (Jacobi etc. at `tol`).
    pub fn build(&self, tol: f64) -> Result<LieAlgebraData> {
        let d = self.dim;
        if self.basis_labels.len() != d {
            return Err(Error::Dimension { expected: d, got: self.basis_labels.len() });
        }
        let mut c = vec![0.0; d * d * d];
        let mut set = vec![false; d * d * d];
        for &(i, j, k, v) in &self.structure_constants {
            if i >= d || j >= d || k >= d {
                return Err(Error::Input(format!("structure constant index ({i},{j},{k}) out of range")));
            }
            for (a, b, val) in [(i, j, v), (j, i, -v)] {
                let idx = (a * d + b) * d + k;
                if set[idx] && (c[idx] - val).abs() > tol {
                    return Err(Error::Input(format!(
                        "conflicting structure constants at ({a},{b},{k})"
                    )));
                }
                c[idx] = val;
                set[idx] = true;
            }
        }
        let trace_form = match &self.trace_form {
            Some(flat) => {
                if flat.len() != d * d {
                    return Err(Error::Dimension { expected: d * d, got: flat.len() });
                }
                Some(DMatrix::from_row_slice(d, d, flat))
            }
            None => None,
        };
        let matrix_rep = match &self.matrix_rep {
            Some(mats) => {
                let mut out = Vec::with_capacity(mats.len());
                for flat in mats {
                    let n = (flat.len() as f64).sqrt().round() as usize;
                    if n * n != flat.len() || n == 0 {
                        return Err(Error::Input("matrix_rep entries must be square".into()));
                    }
                    out.push(DMatrix::from_row_slice(n, n, flat));
                }
                Some(out)
            }
            None => None,
        };
        let alg = LieAlgebraData::new(self.name.clone(), self.basis_labels.clone(), c, trace_form, matrix_rep)?;
        alg.validate(tol)?;
        Ok(alg)
    }
}

/// Elementary matrix `e_{ij}` of size `n`.
pub fn elementary(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

/// Basis layout of `sl_{n+1}`: positive root vectors `E_ij` (i < j),
/// Cartan elements `H_i = e_ii - e_{i+1,i+1}`, negative root vectors `F_ij = e_ji`.
#[derive(Debug, Clone)]
pub struct SlLayout {
    pub size: usize,
    /// `(i, j)` pairs with `i < j`, in basis order.
    pub roots: Vec<(usize, usize)>,
}

impl SlLayout {
    pub fn new(size: usize) -> Self {
        let mut roots = Vec::new();
        for d in 1..size {
            for i in 0..size - d {
                roots.push((i, i + d));
            }
        }
        SlLayout { size, roots }
    }

    pub fn n_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn rank(&self) -> usize {
        self.size - 1
    }

    pub fn dim(&self) -> usize {
        2 * self.n_roots() + self.rank()
    }

    pub fn e(&self, alpha: usize) -> usize {
        alpha
    }

    pub fn h(&self, i: usize) -> usize {
        self.n_roots() + i
    }

    pub fn f(&self, alpha: usize) -> usize {
        self.n_roots() + self.rank() + alpha
    }

    /// Index of the simple root `(i, i+1)` within `roots` (the first `rank` entries).
    pub fn simple(&self, i: usize) -> usize {
        i
    }
}

/// `sl_{size}(R)` in the root basis of [`SlLayout`].
pub fn sl(size: usize) -> Result<LieAlgebraData> {
    if size < 2 {
        return Err(Error::Input("sl_n requires n >= 2".into()));
    }
    let layout = SlLayout::new(size);
    let mut mats = Vec::with_capacity(layout.dim());
    let mut labels = Vec::with_capacity(layout.dim());
    let sl2 = size == 2;
    for &(i, j) in &layout.roots {
        mats.push(elementary(size, i, j));
        labels.push(if sl2 { "E".to_string() } else { format!("E{}{}", i + 1, j + 1) });
    }
    for i in 0..layout.rank() {
        mats.push(elementary(size, i, i) - elementary(size, i + 1, i + 1));
        labels.push(if sl2 { "H".to_string() } else { format!("H{}", i + 1) });
    }
    for &(i, j) in &layout.roots {
        mats.push(elementary(size, j, i));
        labels.push(if sl2 { "F".to_string() } else { format!("F{}{}", i + 1, j + 1) });
    }
    LieAlgebraData::from_matrices(format!("sl{size}"), labels, mats)
}

/// `gl_2` in the basis `E, H, F, I`.
pub fn gl2() -> Result<LieAlgebraData> {
    let labels = ["E", "H", "F", "I"].iter().map(|s| s.to_string()).collect();
    let mats = vec![
        elementary(2, 0, 1),
        elementary(2, 0, 0) - elementary(2, 1, 1),
        elementary(2, 1, 0),
        DMatrix::identity(2, 2),
    ];
    LieAlgebraData::from_matrices("gl2", labels, mats)
}

/// Direct sum `g ⊕ g` realized block-diagonally; first copy occupies indices `0..dim`.
pub fn direct_sum_square(g: &LieAlgebraData) -> Result<LieAlgebraData> {
    let rep = g
        .matrix_rep()
        .ok_or_else(|| Error::Unsupported("direct sum needs a matrix representation".into()))?;
    let n = rep[0].nrows();
    let mut mats = Vec::with_capacity(2 * rep.len());
    let mut labels = Vec::with_capacity(2 * rep.len());
    for copy in 0..2 {
        for (m, l) in rep.iter().zip(g.basis_labels()) {
            let mut big = DMatrix::zeros(2 * n, 2 * n);
            big.view_mut((copy * n, copy * n), (n, n)).copy_from(m);
            mats.push(big);
            labels.push(format!("{l}_{}", copy + 1));
        }
    }
    LieAlgebraData::from_matrices(format!("{}+{}", g.name(), g.name()), labels, mats)
}
