use crate::cauchy::require_injective;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::kernels::dot;
use crate::C64;

/// A Trummer-like matrix: Cauchy-like with `t = s`, `s` injective, and the
/// diagonal (which the generators cannot recover) stored in `d`.
///
/// `diag(s)·T - T·diag(s) = G·B`, so `T[i, j] = G[i, :]·B[:, j] / (s_i - s_j)`
/// for `i != j` and `T[i, i] = d_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrummerMatrix {
    n: usize,
    r: usize,
    /// Row-major `n x r`.
    g: Vec<C64>,
    /// Column-major `r x n`.
    b: Vec<C64>,
    s: Vec<C64>,
    d: Vec<C64>,
}

impl TrummerMatrix {
    pub fn new(g: &DenseMatrix, b: &DenseMatrix, s: Vec<C64>, d: Vec<C64>) -> Result<Self> {
        let (n, r) = g.shape();
        if b.shape() != (r, n) {
            return Err(Error::DimensionMismatch {
                what: "generator B",
                expected: (r, n),
                got: b.shape(),
            });
        }
        let b_cols = (0..n).flat_map(|j| (0..r).map(move |l| b[(l, j)])).collect();
        Self::from_parts(n, r, g.as_slice().to_vec(), b_cols, s, d)
    }

    /// Builds from raw storage: `g` row-major `n x r`, `b_cols` holding the
    /// columns of `B` one after the other.
    pub fn from_parts(n: usize, r: usize, g: Vec<C64>, b_cols: Vec<C64>, s: Vec<C64>, d: Vec<C64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidProblem("empty matrix".into()));
        }
        if g.len() != n * r {
            return Err(Error::DimensionMismatch {
                what: "generator G",
                expected: (n, r),
                got: (g.len() / r.max(1), r),
            });
        }
        if b_cols.len() != n * r {
            return Err(Error::DimensionMismatch {
                what: "generator B",
                expected: (r, n),
                got: (r, b_cols.len() / r.max(1)),
            });
        }
        for (what, v) in [("node vector s", &s), ("diagonal d", &d)] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    what,
                    expected: (n, 1),
                    got: (v.len(), 1),
                });
            }
        }
        require_injective(&s)?;
        Ok(Self { n, r, g, b: b_cols, s, d })
    }

    /// `I` with empty-product generators `G = 0`, `B = 0` of rank one.
    pub fn identity(s: Vec<C64>) -> Result<Self> {
        let n = s.len();
        Self::from_parts(n, 1, vec![C64::new(0.0, 0.0); n], vec![C64::new(0.0, 0.0); n], s, vec![C64::new(1.0, 0.0); n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn g_row(&self, i: usize) -> &[C64] {
        &self.g[i * self.r..(i + 1) * self.r]
    }

    pub fn b_col(&self, j: usize) -> &[C64] {
        &self.b[j * self.r..(j + 1) * self.r]
    }

    pub fn s(&self) -> &[C64] {
        &self.s
    }

    pub fn d(&self) -> &[C64] {
        &self.d
    }

    pub(crate) fn g_storage(&self) -> &[C64] {
        &self.g
    }

    pub(crate) fn b_storage(&self) -> &[C64] {
        &self.b
    }

    pub fn g_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.n, self.r, |i, l| self.g[i * self.r + l])
    }

    pub fn b_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.r, self.n, |l, j| self.b[j * self.r + l])
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        if i == j {
            self.d[i]
        } else {
            dot(self.g_row(i), self.b_col(j)) / (self.s[i] - self.s[j])
        }
    }

    /// `max_i |G[i, :]·B[:, i]|`; zero for an exact Trummer-like displacement.
    pub fn compatibility_defect(&self) -> f64 {
        (0..self.n)
            .map(|i| dot(self.g_row(i), self.b_col(i)).norm())
            .fold(0.0, f64::max)
    }
}

/// Dense form: generator entries off the diagonal, `d` on it.
pub fn trummer_reconstruct_dense(t: &TrummerMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(t.n, t.n, |i, j| t.entry(i, j))
}

/// `T·v`, reconstructing one row of `T` at a time.
pub fn trummer_matvec(t: &TrummerMatrix, v: &[C64]) -> Result<Vec<C64>> {
    check_len(t.n, v.len())?;
    Ok((0..t.n)
        .map(|i| (0..t.n).map(|j| t.entry(i, j) * v[j]).sum())
        .collect())
}

/// `v·T` for a row vector `v`.
pub fn trummer_vecmat(v: &[C64], t: &TrummerMatrix) -> Result<Vec<C64>> {
    check_len(t.n, v.len())?;
    let mut out = vec![C64::new(0.0, 0.0); t.n];
    for (i, vi) in v.iter().enumerate() {
        for (j, o) in out.iter_mut().enumerate() {
            *o += vi * t.entry(i, j);
        }
    }
    Ok(out)
}

/// `T·X` column by column.
pub fn trummer_apply(t: &TrummerMatrix, x: &DenseMatrix) -> Result<DenseMatrix> {
    check_len(t.n, x.rows())?;
    let mut out = DenseMatrix::zeros(t.n, x.cols());
    for j in 0..x.cols() {
        let col = trummer_matvec(t, &x.column(j))?;
        for (i, v) in col.into_iter().enumerate() {
            out[(i, j)] = v;
        }
    }
    Ok(out)
}

fn check_len(n: usize, got: usize) -> Result<()> {
    if got != n {
        return Err(Error::DimensionMismatch {
            what: "vector",
            expected: (n, 1),
            got: (got, 1),
        });
    }
    Ok(())
}
