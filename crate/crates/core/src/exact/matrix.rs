//! Exact linear algebra over Gaussian rationals.
//!
//! Matrices are stored row-sparse. Elimination converts to a dense working
//! copy and pivots on the nonzero candidate of smallest bit size; the reduced
//! echelon form does not depend on that choice, so every basis returned here
//! is canonical.

use std::collections::BTreeMap;
use std::fmt;

use super::scalar::Scalar;
use crate::error::{Error, Result};

pub type Vector = Vec<Scalar>;

pub fn zero_vector(len: usize) -> Vector {
    vec![Scalar::zero(); len]
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// Plain (bilinear) dot product.
pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

pub fn axpy(acc: &mut [Scalar], coeff: &Scalar, x: &[Scalar]) {
    if coeff.is_zero() {
        return;
    }
    for (a, v) in acc.iter_mut().zip(x) {
        if !v.is_zero() {
            *a += coeff * v;
        }
    }
}

/// Linear combination `sum_k coeffs[k] * vectors[k]`.
pub fn combine(coeffs: &[Scalar], vectors: &[Vector], len: usize) -> Vector {
    let mut out = zero_vector(len);
    for (c, v) in coeffs.iter().zip(vectors) {
        axpy(&mut out, c, v);
    }
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Scalar>>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for k in 0..n {
            m.set(k, k, Scalar::one());
        }
        m
    }

    pub fn from_dense(rows: usize, cols: usize, dense: &[Vector]) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for (r, row) in dense.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.data[r].insert(c, v.clone());
                }
            }
        }
        m
    }

    /// Builds a matrix whose `k`-th column is `columns[k]`.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.data[r].insert(c, v.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.data[r].get(&c).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Scalar) {
        let cur = self.get(r, c);
        self.set(r, c, cur + v);
    }

    pub fn row_entries(&self, r: usize) -> impl Iterator<Item = (usize, &Scalar)> {
        self.data[r].iter().map(|(c, v)| (*c, v))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        let mut out = vec![zero_vector(self.rows); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                out[*c][r] = v.clone();
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vector> {
        (0..self.rows)
            .map(|r| {
                let mut row = zero_vector(self.cols);
                for (c, v) in &self.data[r] {
                    row[*c] = v.clone();
                }
                row
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                t.data[*c].insert(r, v.clone());
            }
        }
        t
    }

    pub fn conj_transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                t.data[*c].insert(r, v.conj());
            }
        }
        t
    }

    pub fn conj(&self) -> Matrix {
        let mut t = self.clone();
        for row in &mut t.data {
            for v in row.values_mut() {
                *v = v.conj();
            }
        }
        t
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        if s.is_zero() {
            return Matrix::zeros(self.rows, self.cols);
        }
        let mut t = self.clone();
        for row in &mut t.data {
            for v in row.values_mut() {
                *v = &*v * s;
            }
        }
        t
    }

    pub fn add(&self, o: &Matrix) -> Result<Matrix> {
        self.check_same_shape(o)?;
        let mut out = self.clone();
        for (r, row) in o.data.iter().enumerate() {
            for (c, v) in row {
                out.add_to(r, *c, v);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Matrix) -> Result<Matrix> {
        self.add(&o.scale(&-Scalar::one()))
    }

    fn check_same_shape(&self, o: &Matrix) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, o.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, a) in row {
                for (c, b) in &o.data[*k] {
                    let e = acc.entry(*c).or_insert_with(Scalar::zero);
                    *e += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[r] = acc;
        }
        Ok(out)
    }

    pub fn apply(&self, x: &[Scalar]) -> Result<Vector> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} for {}x{} matrix",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().filter(|(c, _)| !x[**c].is_zero()).map(|(c, v)| v * &x[*c]).sum())
            .collect())
    }

    /// Stacks `self` on top of `o`.
    pub fn vstack(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.cols {
            return Err(Error::Dimension(format!("vstack with {} vs {} columns", self.cols, o.cols)));
        }
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Ok(Matrix { rows: self.rows + o.rows, cols: self.cols, data })
    }

    /// Places `o` to the right of `self`.
    pub fn hstack(&self, o: &Matrix) -> Result<Matrix> {
        if self.rows != o.rows {
            return Err(Error::Dimension(format!("hstack with {} vs {} rows", self.rows, o.rows)));
        }
        let mut out = self.clone();
        out.cols += o.cols;
        for (r, row) in o.data.iter().enumerate() {
            for (c, v) in row {
                out.data[r].insert(self.cols + c, v.clone());
            }
        }
        Ok(out)
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols && *self == self.conj_transpose()
    }

    pub fn rank(&self) -> usize {
        Echelon::reduce(self.to_dense(), self.cols).pivots.len()
    }

    /// Basis of `ker A` in reduced echelon form.
    pub fn kernel(&self) -> Vec<Vector> {
        let ech = Echelon::reduce(self.to_dense(), self.cols);
        rref_basis(ech.kernel(), self.cols)
    }

    /// Basis of the column space in reduced echelon form.
    pub fn column_space(&self) -> Vec<Vector> {
        rref_basis(self.columns(), self.rows)
    }

    pub fn determinant(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.to_dense();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = pick_pivot(&m, c, c) else {
                return Ok(Scalar::zero());
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            let piv = m[c][c].clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] * &inv;
                let (top, bottom) = m.split_at_mut(r);
                for k in c..n {
                    if !top[c][k].is_zero() {
                        let d = &f * &top[c][k];
                        bottom[0][k] -= &d;
                    }
                }
            }
        }
        Ok(det)
    }

    /// Leading principal minors `det(A[..k, ..k])` for `k = 1..=n`, computed without pivoting.
    pub fn leading_minors(&self) -> Result<Vec<Scalar>> {
        if self.rows != self.cols {
            return Err(Error::Dimension("minors of a non-square matrix".into()));
        }
        (1..=self.rows)
            .map(|k| {
                let mut sub = Matrix::zeros(k, k);
                for r in 0..k {
                    for (c, v) in self.row_entries(r) {
                        if c < k {
                            sub.set(r, c, v.clone());
                        }
                    }
                }
                sub.determinant()
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let aug = self.hstack(&Matrix::identity(n)).ok()?;
        let ech = Echelon::reduce(aug.to_dense(), 2 * n);
        if ech.pivots.len() < n || ech.pivots[n - 1] != n - 1 {
            return None;
        }
        let dense: Vec<Vector> = ech.rows[..n].iter().map(|row| row[n..].to_vec()).collect();
        Some(Matrix::from_dense(n, n, &dense))
    }
}

fn pick_pivot(m: &[Vector], col: usize, start: usize) -> Option<usize> {
    (start..m.len()).filter(|&r| !m[r][col].is_zero()).min_by_key(|&r| (m[r][col].bit_size(), r))
}

/// A dense matrix in reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vector>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    /// Row-reduces the first `ncols` columns of `m` (extra columns are carried along).
    pub fn reduce(mut m: Vec<Vector>, ncols: usize) -> Echelon {
        let width = m.first().map_or(ncols, Vec::len);
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..ncols {
            if prow >= m.len() {
                break;
            }
            let Some(p) = pick_pivot(&m, c, prow) else { continue };
            m.swap(p, prow);
            let inv = m[prow][c].inv().expect("nonzero pivot");
            for k in c..width {
                if !m[prow][k].is_zero() {
                    m[prow][k] = &m[prow][k] * &inv;
                }
            }
            let pivot_row = m[prow].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r == prow || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for k in c..width {
                    if !pivot_row[k].is_zero() {
                        row[k] -= &(&f * &pivot_row[k]);
                    }
                }
            }
            pivots.push(c);
            prow += 1;
        }
        Echelon { rows: m, pivots, cols: ncols }
    }

    /// Kernel vectors of the reduced matrix, one per free column.
    pub fn kernel(&self) -> Vec<Vector> {
        let mut out = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = zero_vector(self.cols);
            v[f] = Scalar::one();
            for (r, &p) in self.pivots.iter().enumerate() {
                v[p] = -&self.rows[r][f];
            }
            out.push(v);
        }
        out
    }
}

/// Reduced echelon basis of the span of `vectors` (each of length `len`).
pub fn rref_basis(vectors: Vec<Vector>, len: usize) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let ech = Echelon::reduce(vectors, len);
    let k = ech.pivots.len();
    ech.rows.into_iter().take(k).collect()
}

/// Dimension of the span of `vectors`.
pub fn span_rank(vectors: &[Vector], len: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Echelon::reduce(vectors.to_vec(), len).pivots.len()
}

/// True iff `span(a) == span(b)`.
pub fn same_span(a: &[Vector], b: &[Vector], len: usize) -> bool {
    rref_basis(a.to_vec(), len) == rref_basis(b.to_vec(), len)
}

/// A row vector `y` with `yᵀA = 0` and `yᵀb ≠ 0`, witnessing that `Ax = b` has no solution.
#[derive(Clone, Debug, PartialEq)]
pub struct InfeasibilityCertificate {
    pub left: Vector,
}

impl InfeasibilityCertificate {
    /// Re-checks the certificate by substitution.
    pub fn verify(&self, a: &Matrix, b: &[Scalar]) -> bool {
        let ya = a.transpose().apply(&self.left).expect("certificate length");
        is_zero_vector(&ya) && !dot(&self.left, b).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution {
    pub particular: Vector,
    pub kernel: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Solve {
    Feasible(AffineSolution),
    Infeasible(InfeasibilityCertificate),
}

impl Solve {
    pub fn feasible(self) -> Option<AffineSolution> {
        match self {
            Solve::Feasible(s) => Some(s),
            Solve::Infeasible(_) => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Solve::Feasible(_))
    }
}

/// Solves `A x = b`: a particular solution with free variables set to zero plus
/// a reduced echelon kernel basis, or a left-kernel certificate of infeasibility.
pub fn solve_affine(a: &Matrix, b: &[Scalar]) -> Result<Solve> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for {}x{} system",
            b.len(),
            a.rows(),
            a.cols()
        )));
    }
    let n = a.cols();
    let mut dense = a.to_dense();
    for (row, v) in dense.iter_mut().zip(b) {
        row.push(v.clone());
    }
    let ech = Echelon::reduce(dense, n + 1);
    if ech.pivots.last() == Some(&n) {
        let left = a
            .transpose()
            .kernel()
            .into_iter()
            .find(|y| !dot(y, b).is_zero())
            .expect("an inconsistent system has a separating left kernel vector");
        return Ok(Solve::Infeasible(InfeasibilityCertificate { left }));
    }
    let mut particular = zero_vector(n);
    for (r, &p) in ech.pivots.iter().enumerate() {
        particular[p] = ech.rows[r][n].clone();
    }
    let core = Echelon { rows: ech.rows.iter().map(|r| r[..n].to_vec()).collect(), pivots: ech.pivots, cols: n };
    let kernel = rref_basis(core.kernel(), n);
    Ok(Solve::Feasible(AffineSolution { particular, kernel }))
}

/// A Hermitian positive definite form `<x, y> = sum_ij x_i G_ij conj(y_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramForm {
    matrix: Matrix,
}

impl GramForm {
    pub fn new(matrix: Matrix) -> Result<Self> {
        check_positive_definite(&matrix)?;
        Ok(GramForm { matrix })
    }

    pub fn identity(n: usize) -> Self {
        GramForm { matrix: Matrix::identity(n) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn inner(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let yc: Vector = y.iter().map(Scalar::conj).collect();
        let gy = self.matrix.apply(&yc).expect("gram dimension");
        dot(x, &gy)
    }

    pub fn norm_sqr(&self, x: &[Scalar]) -> Scalar {
        self.inner(x, x)
    }
}

/// Exact test: Hermitian with every leading principal minor real and positive.
pub fn check_positive_definite(m: &Matrix) -> Result<()> {
    if !m.is_hermitian() {
        return Err(Error::NotPositive("matrix is not Hermitian".into()));
    }
    for (k, minor) in m.leading_minors()?.iter().enumerate() {
        if !minor.is_positive_real() {
            return Err(Error::NotPositive(format!("leading minor {} equals {minor}", k + 1)));
        }
    }
    Ok(())
}

/// The solution of `A x = b` of minimal `G`-norm, i.e. the unique solution
/// `G`-orthogonal to `ker A`. `Ok(None)` when the system is infeasible.
pub fn min_norm_solution(a: &Matrix, b: &[Scalar], g: &GramForm) -> Result<Option<Vector>> {
    if g.dim() != a.cols() {
        return Err(Error::Dimension(format!("gram form of size {} on {} unknowns", g.dim(), a.cols())));
    }
    let Some(sol) = solve_affine(a, b)?.feasible() else {
        return Ok(None);
    };
    Ok(Some(project_orthogonal(&sol.particular, &sol.kernel, g)))
}

/// `x - P x` where `P` is the `G`-orthogonal projection onto `span(basis)`.
pub fn project_orthogonal(x: &[Scalar], basis: &[Vector], g: &GramForm) -> Vector {
    let k = basis.len();
    if k == 0 {
        return x.to_vec();
    }
    // M c = r with M[j][m] = <k_m, k_j>, r_j = -<x, k_j>
    let mut m = Matrix::zeros(k, k);
    for j in 0..k {
        for l in 0..k {
            m.set(j, l, g.inner(&basis[l], &basis[j]));
        }
    }
    let rhs: Vector = basis.iter().map(|kj| -g.inner(x, kj)).collect();
    let c = solve_affine(&m, &rhs)
        .expect("square system")
        .feasible()
        .expect("gram matrix of independent vectors is invertible")
        .particular;
    let mut out = x.to_vec();
    for (cj, kj) in c.iter().zip(basis) {
        axpy(&mut out, cj, kj);
    }
    out
}
