//! Plain row-major complex matrices and the dense elimination oracles used
//! to check the structured solvers.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::C64;

/// Row-major complex matrix: `data[i * cols + j] = A[i, j]`.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for v in self.row(i) {
                write!(f, "{:>10.4}{:+.4}i ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "dense matrix data",
                expected: (rows, cols),
                got: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equally long rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    /// Real-valued convenience constructor, mostly for tests and examples.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| C64::new(v, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// An `n x 1` matrix holding `v`.
    pub fn column_vector(v: &[C64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * alpha).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "matrix sum")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "matrix difference")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                what: "matrix product",
                expected: (self.cols, other.cols),
                got: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let src = other.row(k);
                for (o, b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `diag(left)·A - A·diag(right)`.
    pub fn displacement(&self, left: &[C64], right: &[C64]) -> Result<Self> {
        if left.len() != self.rows || right.len() != self.cols {
            return Err(Error::DimensionMismatch {
                what: "displacement nodes",
                expected: self.shape(),
                got: (left.len(), right.len()),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            left[i] * self[(i, j)] - self[(i, j)] * right[j]
        }))
    }

    fn check_same_shape(&self, other: &Self, what: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                what,
                expected: self.shape(),
                got: other.shape(),
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `‖a - b‖_F / ‖b‖_F`, falling back to the absolute error when `b` is zero.
pub fn relative_error(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    let num = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let den = b.frobenius_norm();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Same as [`relative_error`] for plain vectors.
pub fn relative_error_vec(a: &[C64], b: &[C64]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let den = b.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Record of a dense partially pivoted elimination.
#[derive(Debug, Clone)]
pub struct PivotTrace {
    /// `perm[k]` is the original row that became pivot row `k`.
    pub perm: Vec<usize>,
    /// Pivot values `U[k, k]` in elimination order.
    pub pivots: Vec<C64>,
    /// Packed factors: unit lower `L` below the diagonal, `U` on and above.
    pub lu: DenseMatrix,
}

/// Gaussian elimination with partial pivoting that never aborts; zero pivots
/// are recorded and their column is skipped. Ties pick the smallest index.
pub fn partial_pivot_trace(a: &DenseMatrix) -> Result<PivotTrace> {
    let n = square_dim(a, "pivot trace")?;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let q = argmax_column(&lu, k);
        lu.swap_rows(k, q);
        perm.swap(k, q);
        let p = lu[(k, k)];
        pivots.push(p);
        if p == C64::new(0.0, 0.0) {
            continue;
        }
        eliminate_below(&mut lu, k, p);
    }
    Ok(PivotTrace { perm, pivots, lu })
}

/// Oracle solve of `A x = b` by Gaussian elimination with partial pivoting.
pub fn dense_solve_oracle(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    let n = square_dim(a, "oracle system matrix")?;
    if b.rows() != n {
        return Err(Error::DimensionMismatch {
            what: "oracle right-hand side",
            expected: (n, b.cols()),
            got: b.shape(),
        });
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    for k in 0..n {
        let q = argmax_column(&lu, k);
        lu.swap_rows(k, q);
        x.swap_rows(k, q);
        let p = lu[(k, k)];
        if p == C64::new(0.0, 0.0) {
            return Err(Error::SingularMatrix { step: k });
        }
        for i in k + 1..n {
            let f = lu[(i, k)] / p;
            lu[(i, k)] = f;
            for j in k + 1..n {
                let v = lu[(k, j)];
                lu[(i, j)] -= f * v;
            }
            for j in 0..x.cols() {
                let v = x[(k, j)];
                x[(i, j)] -= f * v;
            }
        }
    }
    back_substitute(&lu, &mut x);
    Ok(x)
}

/// LU factorization without pivoting in shared storage.
pub fn dense_lu_nopivot(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = square_dim(a, "lu factor")?;
    let mut lu = a.clone();
    for k in 0..n {
        let p = lu[(k, k)];
        if p == C64::new(0.0, 0.0) {
            return Err(Error::SingularMatrix { step: k });
        }
        eliminate_below(&mut lu, k, p);
    }
    Ok(lu)
}

/// Splits packed LU storage into `(L, U)`.
pub fn split_lu(lu: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let n = lu.rows();
    let l = DenseMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => lu[(i, j)],
        std::cmp::Ordering::Equal => C64::new(1.0, 0.0),
        std::cmp::Ordering::Less => C64::new(0.0, 0.0),
    });
    let u = DenseMatrix::from_fn(n, n, |i, j| if i <= j { lu[(i, j)] } else { C64::new(0.0, 0.0) });
    (l, u)
}

/// Inverse of an upper triangular matrix by column back-substitution.
pub fn upper_triangular_inverse(u: &DenseMatrix) -> Result<DenseMatrix> {
    let n = square_dim(u, "triangular inverse")?;
    let mut w = DenseMatrix::identity(n);
    for k in 0..n {
        if u[(k, k)] == C64::new(0.0, 0.0) {
            return Err(Error::SingularMatrix { step: k });
        }
    }
    let mut packed = u.clone();
    for i in 0..n {
        for j in 0..i {
            packed[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    back_substitute(&packed, &mut w);
    Ok(w)
}

pub fn dense_inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = square_dim(a, "inverse")?;
    dense_solve_oracle(a, &DenseMatrix::identity(n))
}

/// Numerical rank by complete pivoting: counts pivots whose magnitude
/// exceeds `rel_tol` times the first (largest) one.
pub fn numerical_rank(a: &DenseMatrix, rel_tol: f64) -> usize {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let steps = m.min(n);
    let mut first = 0.0;
    for k in 0..steps {
        let (mut bi, mut bj, mut best) = (k, k, -1.0);
        for i in k..m {
            for j in k..n {
                let v = w[(i, j)].norm();
                if v > best {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        if k == 0 {
            first = best;
        }
        if best <= rel_tol * first || best == 0.0 {
            return k;
        }
        w.swap_rows(k, bi);
        for i in 0..m {
            w.data.swap(i * n + k, i * n + bj);
        }
        let p = w[(k, k)];
        for i in k + 1..m {
            let f = w[(i, k)] / p;
            for j in k..n {
                let v = w[(k, j)];
                w[(i, j)] -= f * v;
            }
        }
    }
    steps
}

fn square_dim(a: &DenseMatrix, what: &'static str) -> Result<usize> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch {
            what,
            expected: (a.rows(), a.rows()),
            got: a.shape(),
        });
    }
    Ok(a.rows())
}

fn argmax_column(a: &DenseMatrix, k: usize) -> usize {
    let mut q = k;
    let mut best = a[(k, k)].norm();
    for i in k + 1..a.rows() {
        let v = a[(i, k)].norm();
        if v > best {
            best = v;
            q = i;
        }
    }
    q
}

fn eliminate_below(lu: &mut DenseMatrix, k: usize, p: C64) {
    let n = lu.rows();
    for i in k + 1..n {
        let f = lu[(i, k)] / p;
        lu[(i, k)] = f;
        for j in k + 1..n {
            let v = lu[(k, j)];
            lu[(i, j)] -= f * v;
        }
    }
}

/// Solves `U x = x` in place using the upper triangle of `lu`.
fn back_substitute(lu: &DenseMatrix, x: &mut DenseMatrix) {
    let n = lu.rows();
    for k in (0..n).rev() {
        for j in k + 1..n {
            let f = lu[(k, j)];
            for c in 0..x.cols() {
                let v = x[(j, c)];
                x[(k, c)] -= f * v;
            }
        }
        let p = lu[(k, k)];
        for c in 0..x.cols() {
            x[(k, c)] /= p;
        }
    }
}
