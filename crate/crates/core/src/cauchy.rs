//! Cauchy-like matrices in generator form.
//!
//! A matrix `C` is Cauchy-like with displacement rank `r` when
//! `diag(t)·C - C·diag(s) = G·B` for `G: n x r`, `B: r x n`. Row nodes are
//! `t`, column nodes are `s`, and whenever `t_i != s_j` the entry is
//! `C[i, j] = G[i, :]·B[:, j] / (t_i - s_j)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::kernels::dot;
use crate::C64;

/// Generators `(G, B, t, s)` of a Cauchy-like matrix.
///
/// `G` is stored row-major and `B` column-major, so both `G[i, :]` and
/// `B[:, j]` are contiguous slices of length `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyLikeGenerators {
    n: usize,
    r: usize,
    g: Vec<C64>,
    b: Vec<C64>,
    t: Vec<C64>,
    s: Vec<C64>,
}

/// Structural facts about a pair of node vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub s_injective: bool,
    pub t_injective: bool,
    /// `t_i != s_j` for every pair, i.e. the matrix is fully reconstructible.
    pub disjoint: bool,
    /// `min |s_i - s_j|` over `i != j` (infinite when `n == 1`).
    pub min_s_gap: f64,
    /// `min |t_i - s_j|` over all pairs.
    pub min_ts_gap: f64,
}

impl ValidationReport {
    pub fn fully_reconstructible(&self) -> bool {
        self.disjoint
    }
}

impl CauchyLikeGenerators {
    /// Builds generators from an `n x r` matrix `g`, an `r x n` matrix `b`
    /// and the node vectors.
    pub fn new(g: &DenseMatrix, b: &DenseMatrix, t: Vec<C64>, s: Vec<C64>) -> Result<Self> {
        let (n, r) = g.shape();
        if b.shape() != (r, n) {
            return Err(Error::DimensionMismatch {
                what: "generator B",
                expected: (r, n),
                got: b.shape(),
            });
        }
        let mut b_cols = Vec::with_capacity(n * r);
        for j in 0..n {
            for l in 0..r {
                b_cols.push(b[(l, j)]);
            }
        }
        Self::from_parts(n, r, g.as_slice().to_vec(), b_cols, t, s)
    }

    /// Builds generators from raw storage: `g` row-major `n x r`, `b_cols`
    /// holding the columns of `B` one after another.
    pub fn from_parts(
        n: usize,
        r: usize,
        g: Vec<C64>,
        b_cols: Vec<C64>,
        t: Vec<C64>,
        s: Vec<C64>,
    ) -> Result<Self> {
        if n == 0 || r == 0 || r > n {
            return Err(Error::InvalidProblem(format!(
                "need 1 <= r <= n, got n = {n}, r = {r}"
            )));
        }
        if g.len() != n * r {
            return Err(Error::DimensionMismatch {
                what: "generator G",
                expected: (n, r),
                got: (g.len(), 1),
            });
        }
        if b_cols.len() != n * r {
            return Err(Error::DimensionMismatch {
                what: "generator B",
                expected: (r, n),
                got: (b_cols.len(), 1),
            });
        }
        if t.len() != n || s.len() != n {
            return Err(Error::DimensionMismatch {
                what: "node vectors",
                expected: (n, n),
                got: (t.len(), s.len()),
            });
        }
        Ok(Self {
            n,
            r,
            g,
            b: b_cols,
            t,
            s,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Displacement rank `r` (number of generator columns).
    pub fn rank(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn g_row(&self, i: usize) -> &[C64] {
        &self.g[i * self.r..(i + 1) * self.r]
    }

    #[inline]
    pub fn b_col(&self, j: usize) -> &[C64] {
        &self.b[j * self.r..(j + 1) * self.r]
    }

    pub fn t(&self) -> &[C64] {
        &self.t
    }

    pub fn s(&self) -> &[C64] {
        &self.s
    }

    pub(crate) fn g_storage(&self) -> &[C64] {
        &self.g
    }

    pub(crate) fn b_storage(&self) -> &[C64] {
        &self.b
    }

    pub fn g_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.n, self.r, |i, l| self.g_row(i)[l])
    }

    pub fn b_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.r, self.n, |l, j| self.b_col(j)[l])
    }

    /// Entry `(i, j)` (zero-based) recovered from the generators.
    pub fn reconstruct_entry(&self, i: usize, j: usize) -> Result<C64> {
        let den = self.t[i] - self.s[j];
        if den == C64::new(0.0, 0.0) {
            return Err(Error::NodeCollision { row: i, col: j });
        }
        Ok(dot(self.g_row(i), self.b_col(j)) / den)
    }

    /// The full matrix; fails on the first non-reconstructible entry.
    pub fn reconstruct_dense(&self) -> Result<DenseMatrix> {
        let mut out = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(i, j)] = self.reconstruct_entry(i, j)?;
            }
        }
        Ok(out)
    }

    /// `C·x` computed one reconstructed row at a time.
    pub fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        if x.rows() != self.n {
            return Err(Error::DimensionMismatch {
                what: "Cauchy-like product operand",
                expected: (self.n, x.cols()),
                got: x.shape(),
            });
        }
        let mut out = DenseMatrix::zeros(self.n, x.cols());
        let mut row = vec![C64::new(0.0, 0.0); self.n];
        for i in 0..self.n {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.reconstruct_entry(i, j)?;
            }
            let dst = out.row_mut(i);
            for (j, cij) in row.iter().enumerate() {
                for (d, xv) in dst.iter_mut().zip(x.row(j)) {
                    *d += cij * xv;
                }
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> ValidationReport {
        let (s_injective, min_s_gap) = injectivity(&self.s);
        let (t_injective, _) = injectivity(&self.t);
        let mut min_ts_gap = f64::INFINITY;
        for ti in &self.t {
            for sj in &self.s {
                min_ts_gap = min_ts_gap.min((ti - sj).norm());
            }
        }
        ValidationReport {
            s_injective,
            t_injective,
            disjoint: min_ts_gap > 0.0,
            min_s_gap,
            min_ts_gap,
        }
    }

    /// Errors unless every entry can be recovered from the generators.
    pub fn require_reconstructible(&self) -> Result<()> {
        for (i, ti) in self.t.iter().enumerate() {
            if let Some(j) = self.s.iter().position(|sj| sj == ti) {
                return Err(Error::NodeCollision { row: i, col: j });
            }
        }
        Ok(())
    }

    pub fn require_injective_s(&self) -> Result<()> {
        require_injective(&self.s)
    }
}

/// Returns `(injective, min |v_i - v_j|)`.
pub fn injectivity(v: &[C64]) -> (bool, f64) {
    let mut gap = f64::INFINITY;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            gap = gap.min((v[i] - v[j]).norm());
        }
    }
    (gap > 0.0, gap)
}

pub(crate) fn require_injective(v: &[C64]) -> Result<()> {
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] == v[j] {
                return Err(Error::NonInjectiveNodes { first: i, second: j });
            }
        }
    }
    Ok(())
}

/// Generators whose column nodes repeat one value `r + 1` times.
///
/// The `r + 1` columns sharing that node factor through an `n x r` matrix,
/// so the reconstructed matrix is singular even though every entry is
/// well defined (`t` is kept away from all of `s`).
pub fn singularity_witness(r: usize, n: usize) -> Result<CauchyLikeGenerators> {
    if r == 0 || r + 1 > n {
        return Err(Error::InvalidProblem(format!(
            "witness needs 1 <= r and r + 1 <= n, got r = {r}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5157_0000 + (r as u64) * 1000 + n as u64);
    let s: Vec<C64> = (0..n)
        .map(|i| {
            if i <= r {
                C64::new(5.0, 0.0)
            } else {
                C64::new((9 + i - r - 1) as f64, 0.0)
            }
        })
        .collect();
    let t: Vec<C64> = (0..n).map(|i| C64::new(-1.0 - i as f64, 0.5)).collect();
    let mut sample = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let g: Vec<C64> = (0..n * r).map(|_| sample()).collect();
    let b: Vec<C64> = (0..n * r).map(|_| sample()).collect();
    CauchyLikeGenerators::from_parts(n, r, g, b, t, s)
}
