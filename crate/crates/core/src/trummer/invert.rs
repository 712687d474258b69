//! Generators and diagonal of `T^{-1}` in one elimination sweep, with
//! optional solutions of `T x = b` and `y T = c` along the way.
//!
//! The sweep is Gaussian elimination, with row pivoting on the first block
//! row only, of
//!
//! ```text
//!     [ P^{-1} T   -P^{-1}   P^{-1} [b G] ]
//!     [   -I          0          0        ]
//!     [ [c; B]        0          *        ]
//! ```
//!
//! Row slots `l < k` hold the second block row `n + l` (node `s_l`). Column
//! slots `l < k` hold the second block column `n + sigma[l]` (node
//! `s[sigma[l]]`). After `n` steps the middle block is `-T^{-1}`. Its
//! diagonal is collected one rank-one term per step into `d`, whose entries
//! `0..=k` are no longer needed as Schur complement diagonal by then.

use super::matrix::TrummerMatrix;
use crate::accounting::{FlopCounter, Workspace};
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::kernels::{argmax_abs, chunk_pair, dot, scale_in_place, sub_scaled, swap_chunks};
use crate::report::{PivotMonitor, SolveOptions, SolveWarning};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const MINUS_ONE: C64 = C64::new(-1.0, 0.0);

/// Output of [`trummer_invert`].
#[derive(Debug, Clone)]
pub struct TrummerInverseResult {
    /// `T^{-1}` as a Trummer-like matrix: generators `T^{-1}G` and `-B T^{-1}`,
    /// nodes `s`, diagonal `diag(T^{-1})`.
    pub inverse: TrummerMatrix,
    /// `T^{-1} b` when a right-hand side was given.
    pub x: Option<DenseMatrix>,
    /// `c T^{-1}` when a left-hand side was given.
    pub y: Option<DenseMatrix>,
    pub sigma: Vec<usize>,
    pub flops: u64,
    pub peak_workspace: usize,
    pub warnings: Vec<SolveWarning>,
}

/// Computes the representation of `T^{-1}`; `b` (`n x m1`) and `c`
/// (`m2 x n`) are optional systems solved in the same sweep.
pub fn trummer_invert(
    t: &TrummerMatrix,
    b: Option<&DenseMatrix>,
    c: Option<&DenseMatrix>,
) -> Result<TrummerInverseResult> {
    trummer_invert_with(t, b, c, &SolveOptions::default())
}

pub fn trummer_invert_with(
    t: &TrummerMatrix,
    b: Option<&DenseMatrix>,
    c: Option<&DenseMatrix>,
    opts: &SolveOptions,
) -> Result<TrummerInverseResult> {
    let n = t.n();
    let r = t.rank();
    if let Some(b) = b {
        crate::gko_dense::check_rhs(n, b)?;
    }
    if let Some(c) = c {
        if c.cols() != n {
            return Err(Error::DimensionMismatch {
                what: "left-hand side",
                expected: (c.rows(), n),
                got: c.shape(),
            });
        }
    }
    let mut x = b.cloned().unwrap_or_else(|| DenseMatrix::zeros(n, 0));
    // columns of y as rows, so that every update is a row operation
    let mut yt = c.map(|c| c.transpose()).unwrap_or_else(|| DenseMatrix::zeros(n, 0));
    let (m1, m2) = (x.cols(), yt.cols());

    let mut g = t.g_storage().to_vec();
    let mut bg = t.b_storage().to_vec();
    let mut d = t.d().to_vec();
    let s = t.s();
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut flops = FlopCounter::new();
    let mut ws = Workspace::new();
    let mut monitor = PivotMonitor::new(opts);
    let mut warnings = Vec::new();
    let mut lvec = vec![ZERO; n];
    let mut u = vec![ZERO; n];
    ws.alloc(2 * n);

    let gb = |g: &[C64], bg: &[C64], i: usize, j: usize| dot(&g[i * r..(i + 1) * r], &bg[j * r..(j + 1) * r]);

    for k in 0..n {
        let last = k + 1 == n;
        let sk = s[k];
        for l in 0..k {
            lvec[l] = gb(&g, &bg, l, k) / (s[l] - sk);
        }
        lvec[k] = d[k];
        for l in k + 1..n {
            lvec[l] = gb(&g, &bg, l, k) / (s[sigma[l]] - sk);
        }
        flops.entries(n - 1, r);

        let q = if opts.pivoting { argmax_abs(&lvec, k).0 } else { k };
        let p = lvec[q];
        if p == ZERO {
            return Err(Error::SingularMatrix { step: k });
        }
        monitor.observe(k, p.norm());
        lvec.swap(k, q);
        x.swap_rows(k, q);
        swap_chunks(&mut g, r, k, q);
        sigma.swap(k, q);

        let row_node = s[sigma[k]];
        for l in 0..k {
            u[l] = gb(&g, &bg, k, l) / (row_node - s[sigma[l]]);
        }
        for l in k + 1..n {
            u[l] = if l == q { d[q] } else { gb(&g, &bg, k, l) / (row_node - s[l]) };
        }
        flops.entries(if q != k { n - 2 } else { n - 1 }, r);

        let pinv = p.inv();
        flops.add(1);
        scale_in_place(x.row_mut(k), pinv);
        scale_in_place(&mut g[k * r..(k + 1) * r], pinv);
        scale_in_place(&mut bg[k * r..(k + 1) * r], pinv);
        scale_in_place(yt.row_mut(k), pinv);
        flops.add(m1 + 2 * r + m2);
        for l in (0..n).filter(|&l| l != k) {
            let (ll, ul) = (lvec[l], u[l]);
            let (xk, xl) = chunk_pair(x.as_mut_slice(), m1, k, l);
            sub_scaled(xl, ll, xk);
            let (gk, gl) = chunk_pair(&mut g, r, k, l);
            sub_scaled(gl, ll, gk);
            let (bk, bl) = chunk_pair(&mut bg, r, k, l);
            sub_scaled(bl, ul, bk);
            let (yk, yl) = chunk_pair(yt.as_mut_slice(), m2, k, l);
            sub_scaled(yl, ul, yk);
        }
        flops.axpys(n - 1, m1 + 2 * r + m2);

        if !last {
            for l in k + 1..n {
                d[l] -= pinv * lvec[l] * u[l];
            }
            flops.add(3 * (n - k - 1));
            if q != k {
                let gap = s[sigma[q]] - s[q];
                d[q] = gb(&g, &bg, q, q) / gap;
                flops.entries(1, r);
                if gap.norm() < opts.node_gap_tol {
                    warnings.push(SolveWarning::CloseNodeRefresh {
                        step: k,
                        row: q,
                        gap: gap.norm(),
                    });
                }
            }
        }

        lvec[k] = MINUS_ONE;
        u[k] = MINUS_ONE;
        d[k] = ZERO;
        let mut terms = 0;
        for j in 0..=k {
            let i = sigma[j];
            if i <= k {
                d[i] += pinv * lvec[i] * u[j];
                terms += 1;
            }
        }
        flops.add(3 * terms);
    }

    let mut b_inv = vec![ZERO; n * r];
    let mut y_out = DenseMatrix::zeros(m2, n);
    for (l, &target) in sigma.iter().enumerate() {
        for (dst, src) in b_inv[target * r..(target + 1) * r].iter_mut().zip(&bg[l * r..(l + 1) * r]) {
            *dst = -src;
        }
        for j in 0..m2 {
            y_out[(j, target)] = yt[(l, j)];
        }
    }
    let inverse = TrummerMatrix::from_parts(n, r, g, b_inv, s.to_vec(), d)?;
    let mut all_warnings = monitor.warnings;
    all_warnings.extend(warnings);

    Ok(TrummerInverseResult {
        inverse,
        x: b.map(|_| x),
        y: c.map(|_| y_out),
        sigma,
        flops: flops.total(),
        peak_workspace: ws.peak(),
        warnings: all_warnings,
    })
}
