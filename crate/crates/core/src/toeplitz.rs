//! Reduction of a Toeplitz system to a Cauchy-like system of displacement
//! rank 2.
//!
//! With the circulant shifts `Z_1` and `Z_{-1}` (down-shift with corner
//! entry `+1`, resp. `-1`), every Toeplitz `T` has
//! `Z_{-1}^T·T - T·Z_1^T = z·e_0^T + e_{n-1}·w^T`. Both up-shifts are
//! diagonalized by the unitary DFT `Ω[j, k] = ω^{jk}/√n` (`ω = e^{2πi/n}`)
//! and `E = diag(η^{-j})`, `η = e^{iπ/n}`:
//! `Ω^*·E·Z_{-1}^T = diag(η·ω^k)·Ω^*·E` and `Z_1^T·Ω = Ω·diag(ω^k)`.
//! So `C = Ω^*·E·T·Ω` is Cauchy-like with generators `Ω^*E·[z, e_{n-1}]`
//! and `[e_0^T; w^T]·Ω`. Dividing both node vectors by `η` gives the nodes
//! `t_k = ω^k` and `s_k = η^{-1}·ω^k = η·ω^{k-1}`.
//!
//! The column order matters for pivoted elimination: on ill-conditioned
//! Gaussian Toeplitz matrices, eliminating the column with node `η` first
//! costs two to three digits, while every other cyclic start is accurate.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::cauchy::CauchyLikeGenerators;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::C64;

/// A Toeplitz matrix `T[i, j] = col[i - j]` for `i >= j`, `row[j - i]`
/// otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzOperator {
    col: Vec<C64>,
    row: Vec<C64>,
}

impl ToeplitzOperator {
    /// `col` is the first column, `row` the first row; they must agree on
    /// the corner entry.
    pub fn new(col: Vec<C64>, row: Vec<C64>) -> Result<Self> {
        if col.is_empty() || col.len() != row.len() {
            return Err(Error::InvalidProblem(format!(
                "first column and row must be non-empty and equally long, got {} and {}",
                col.len(),
                row.len()
            )));
        }
        if col[0] != row[0] {
            return Err(Error::InvalidProblem("first column and row disagree on T[0, 0]".into()));
        }
        Ok(Self { col, row })
    }

    pub fn symmetric(col: Vec<C64>) -> Result<Self> {
        Self::new(col.clone(), col)
    }

    pub fn n(&self) -> usize {
        self.col.len()
    }

    pub fn col(&self) -> &[C64] {
        &self.col
    }

    pub fn row(&self) -> &[C64] {
        &self.row
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        if i >= j {
            self.col[i - j]
        } else {
            self.row[j - i]
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.n();
        DenseMatrix::from_fn(n, n, |i, j| self.entry(i, j))
    }

    /// `T·x` in `O(n^2)` time without forming `T`.
    pub fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.n();
        if x.rows() != n {
            return Err(Error::DimensionMismatch {
                what: "right-hand side",
                expected: (n, x.cols()),
                got: x.shape(),
            });
        }
        let mut out = DenseMatrix::zeros(n, x.cols());
        for i in 0..n {
            for j in 0..n {
                let tij = self.entry(i, j);
                let (xr, orow) = (x.row(j), i);
                for (c, v) in xr.iter().enumerate() {
                    out[(orow, c)] += tij * v;
                }
            }
        }
        Ok(out)
    }
}

/// The Gaussian Toeplitz matrix `T[i, j] = a^{(i-j)^2}`, `0 < a < 1`.
pub fn gaussian_toeplitz(n: usize, a: f64) -> Result<ToeplitzOperator> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidProblem(format!("Gaussian parameter must lie in (0, 1), got {a}")));
    }
    if n == 0 {
        return Err(Error::InvalidProblem("empty matrix".into()));
    }
    let col = (0..n).map(|k| C64::new(a.powi((k * k) as i32), 0.0)).collect();
    ToeplitzOperator::symmetric(col)
}

/// Maps right-hand sides into the Cauchy-like frame and solutions back.
#[derive(Clone)]
pub struct ToeplitzTransform {
    n: usize,
    /// `η^{-j}`
    phases: Vec<C64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for ToeplitzTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ToeplitzTransform").field("n", &self.n).finish_non_exhaustive()
    }
}

impl ToeplitzTransform {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let phases = (0..n).map(|j| C64::from_polar(1.0, -PI * j as f64 / n as f64)).collect();
        Self {
            n,
            phases,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// `v ↦ Ω v`
    fn omega(&self, v: &mut [C64]) {
        self.inverse.process(v);
        let scale = 1.0 / (self.n as f64).sqrt();
        v.iter_mut().for_each(|x| *x *= scale);
    }

    /// `v ↦ Ω^* E v`
    fn omega_adjoint_phased(&self, v: &mut [C64]) {
        for (x, p) in v.iter_mut().zip(&self.phases) {
            *x *= p;
        }
        self.forward.process(v);
        let scale = 1.0 / (self.n as f64).sqrt();
        v.iter_mut().for_each(|x| *x *= scale);
    }

    fn columnwise(&self, m: &DenseMatrix, f: impl Fn(&Self, &mut Vec<C64>)) -> Result<DenseMatrix> {
        if m.rows() != self.n {
            return Err(Error::DimensionMismatch {
                what: "transform input",
                expected: (self.n, m.cols()),
                got: m.shape(),
            });
        }
        let mut out = m.clone();
        for j in 0..m.cols() {
            let mut col = m.column(j);
            f(self, &mut col);
            for (i, v) in col.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }

    /// `b ↦ Ω^* E b`, the right-hand side of the Cauchy-like system.
    pub fn forward_rhs(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        self.columnwise(b, |t, v| t.omega_adjoint_phased(v))
    }

    /// `x̂ ↦ Ω x̂`, the solution of the Toeplitz system.
    pub fn backward_solution(&self, xhat: &DenseMatrix) -> Result<DenseMatrix> {
        self.columnwise(xhat, |t, v| t.omega(v))
    }
}

/// Cauchy-like generators of the image of `T` and the transforms linking the
/// two systems. Costs `O(n log n)` operations and `O(n)` storage.
pub fn toeplitz_to_cauchy(t: &ToeplitzOperator) -> Result<(CauchyLikeGenerators, ToeplitzTransform)> {
    let n = t.n();
    let tr = ToeplitzTransform::new(n);
    let zero = C64::new(0.0, 0.0);

    // Z_{-1}^T T - T Z_1^T = z e_0^T + e_{n-1} w^T
    let mut z: Vec<C64> = (0..n)
        .map(|i| if i + 1 < n { t.entry(i + 1, 0) - t.entry(i, n - 1) } else { -t.entry(0, 0) * 2.0 })
        .collect();
    let mut w: Vec<C64> = (0..n)
        .map(|j| if j == 0 { zero } else { -t.entry(0, j) - t.entry(n - 1, j - 1) })
        .collect();
    let mut e_last = vec![zero; n];
    e_last[n - 1] = C64::new(1.0, 0.0);

    // G = η^{-1} Ω^* E [z, e_{n-1}]
    let eta_inv = C64::from_polar(1.0, -PI / n as f64);
    tr.omega_adjoint_phased(&mut z);
    tr.omega_adjoint_phased(&mut e_last);
    let g = z.iter().zip(&e_last).flat_map(|(a, b)| [a * eta_inv, b * eta_inv]).collect();

    // B = [e_0^T; w^T] Ω
    tr.omega(&mut w);
    let first = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let b = w.iter().flat_map(|wk| [first, *wk]).collect();

    let omega = |k: usize| C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
    let tn = (0..n).map(omega).collect();
    let sn = (0..n).map(|k| eta_inv * omega(k)).collect();
    let gen = CauchyLikeGenerators::from_parts(n, 2, g, b, tn, sn)?;
    Ok((gen, tr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{dense_solve_oracle, relative_error};
    use crate::fixtures::random_matrix;
    use crate::gko_downdate::solve_downdating;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn gaussian_entries() {
        let t = gaussian_toeplitz(5, 0.5).unwrap();
        assert_eq!(t.entry(0, 0), c(1.0));
        assert_eq!(t.entry(2, 0), c(0.0625));
        assert_eq!(t.entry(1, 4), c(0.5f64.powi(9)));
        assert!(gaussian_toeplitz(4, 1.0).is_err());
        assert!(gaussian_toeplitz(4, 0.0).is_err());
    }

    #[test]
    fn displacement_residual_is_small() {
        let t = gaussian_toeplitz(8, 0.5).unwrap();
        let (gen, _) = toeplitz_to_cauchy(&t).unwrap();
        let cm = gen.reconstruct_dense().unwrap();
        let disp = cm.displacement(gen.t(), gen.s()).unwrap();
        let gb = gen.g_matrix().matmul(&gen.b_matrix()).unwrap();
        assert!(disp.sub(&gb).unwrap().frobenius_norm() <= 1e-12 * cm.frobenius_norm());
    }

    #[test]
    fn identity_round_trip() {
        let mut col = vec![c(0.0); 6];
        col[0] = c(1.0);
        let t = ToeplitzOperator::symmetric(col).unwrap();
        let (gen, tr) = toeplitz_to_cauchy(&t).unwrap();
        let b = random_matrix(6, 2, 3);
        let xhat = solve_downdating(&gen, &tr.forward_rhs(&b).unwrap()).unwrap().x;
        let x = tr.backward_solution(&xhat).unwrap();
        assert!(relative_error(&x, &b) < 1e-14);
    }

    #[test]
    fn random_toeplitz_matches_dense_solve() {
        let cr = random_matrix(2, 8, 11);
        let mut row = cr.row(1).to_vec();
        row[0] = cr[(0, 0)];
        let t = ToeplitzOperator::new(cr.row(0).to_vec(), row).unwrap();
        let b = random_matrix(8, 1, 12);
        let (gen, tr) = toeplitz_to_cauchy(&t).unwrap();
        let xhat = solve_downdating(&gen, &tr.forward_rhs(&b).unwrap()).unwrap().x;
        let x = tr.backward_solution(&xhat).unwrap();
        let oracle = dense_solve_oracle(&t.to_dense(), &b).unwrap();
        assert!(relative_error(&x, &oracle) < 1e-11);
        assert!(relative_error(&t.apply(&oracle).unwrap(), &b) < 1e-12);
    }

    #[test]
    fn node_geometry() {
        let t = gaussian_toeplitz(16, 0.7).unwrap();
        let (gen, _) = toeplitz_to_cauchy(&t).unwrap();
        let v = gen.validate();
        assert!(v.s_injective && v.t_injective && v.disjoint);
        let omega = |k: f64| C64::from_polar(1.0, 2.0 * PI * k / 16.0);
        for k in 0..16 {
            assert!((gen.t()[k] - omega(k as f64)).norm() < 1e-15);
            assert!((gen.s()[k] - omega(k as f64 - 0.5)).norm() < 1e-15);
        }
        let expected = 2.0 * (PI / 32.0).sin();
        assert!((v.min_ts_gap - expected).abs() < 1e-14);
        assert!((v.min_s_gap - 2.0 * (PI / 16.0).sin()).abs() < 1e-14);
    }
}
