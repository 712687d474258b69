//! Pivoted downdating solver for Trummer-like systems.
//!
//! Row `l` of the working matrix carries row node `s[sigma[l]]`, column `j`
//! keeps node `s[j]`. The one entry per active row that the generators
//! cannot give sits in `d`: before step `k`, every row `l >= k` has either
//! `sigma[l] == l` or `sigma[l] < k`, so for the active columns that entry
//! is always `(l, l)`. Swapping rows `k` and `q` moves the stored value
//! `d_q` off the diagonal into the pivot row, and leaves `(q, q)`
//! reconstructible; it is recomputed from the updated generators.

use super::matrix::TrummerMatrix;
use crate::accounting::{FlopCounter, Workspace};
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::gko_dense::check_rhs;
use crate::kernels::{add_scaled, argmax_abs, dot, scale_in_place, scale_into, sub_scaled, swap_chunks};
use crate::report::{PivotMonitor, SolveOptions, SolveReport, SolveWarning};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Solves `T x = b` for a Trummer-like `T`.
pub fn trummer_solve(t: &TrummerMatrix, b: &DenseMatrix) -> Result<SolveReport> {
    trummer_solve_with(t, b, &SolveOptions::default())
}

pub fn trummer_solve_with(t: &TrummerMatrix, b: &DenseMatrix, opts: &SolveOptions) -> Result<SolveReport> {
    let n = t.n();
    let r = t.rank();
    check_rhs(n, b)?;
    let m = b.cols();

    let mut g = t.g_storage().to_vec();
    let mut bg = t.b_storage().to_vec();
    let mut d = t.d().to_vec();
    let s = t.s();
    let mut x = b.clone();
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut flops = FlopCounter::new();
    let mut ws = Workspace::new();
    let mut monitor = PivotMonitor::new(opts);
    let mut warnings = Vec::new();

    let b_input = if opts.aposteriori_check {
        ws.alloc(n * r);
        Some(bg.clone())
    } else {
        None
    };
    let mut lvec = vec![ZERO; n];
    let mut u = vec![ZERO; n];
    let mut tmp_x = vec![ZERO; m];
    let mut tmp_g = vec![ZERO; r];
    let mut tmp_b = vec![ZERO; r];
    ws.alloc(2 * n + m + 2 * r);

    let gb = |g: &[C64], bg: &[C64], i: usize, j: usize| dot(&g[i * r..(i + 1) * r], &bg[j * r..(j + 1) * r]);

    for k in 0..n - 1 {
        lvec[k] = d[k];
        for l in k + 1..n {
            lvec[l] = gb(&g, &bg, l, k) / (s[sigma[l]] - s[k]);
        }
        flops.entries(n - k - 1, r);

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
        u[k] = p;

        let pinv = p.inv();
        let sk = s[sigma[k]];
        scale_into(&mut tmp_b, pinv, &bg[k * r..(k + 1) * r]);
        scale_into(&mut tmp_x, pinv, x.row(k));
        scale_into(&mut tmp_g, pinv, &g[k * r..(k + 1) * r]);
        flops.add(1 + 2 * r + m);
        for l in k + 1..n {
            let ul = if l == q { d[q] } else { gb(&g, &bg, k, l) / (sk - s[l]) };
            sub_scaled(&mut bg[l * r..(l + 1) * r], ul, &tmp_b);
            let ll = lvec[l];
            sub_scaled(x.row_mut(l), ll, &tmp_x);
            sub_scaled(&mut g[l * r..(l + 1) * r], ll, &tmp_g);
            d[l] -= pinv * ll * ul;
        }
        flops.entries(n - k - 1, r);
        flops.axpys(n - k - 1, 2 * r + m);
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

    // d holds the last Schur complement entry whether or not row n-1 moved
    let last = n - 1;
    u[last] = d[last];
    if u[last] == ZERO {
        return Err(Error::SingularMatrix { step: last });
    }
    monitor.observe(last, u[last].norm());
    scale_in_place(x.row_mut(last), u[last].inv());
    flops.add(1 + m);

    for k in (0..last).rev() {
        let sk = s[k];
        let uk_inv = u[k].inv();
        scale_into(&mut tmp_b, uk_inv, &bg[k * r..(k + 1) * r]);
        tmp_x.copy_from_slice(x.row(k));
        flops.add(1 + r);
        for l in k + 1..n {
            let ul = gb(&g, &bg, k, l) / (sk - s[l]);
            add_scaled(&mut bg[l * r..(l + 1) * r], ul, &tmp_b);
            sub_scaled(&mut tmp_x, ul, x.row(l));
        }
        flops.entries(n - k - 1, r);
        flops.axpys(n - k - 1, r + m);
        scale_into(x.row_mut(k), uk_inv, &tmp_x);
        flops.add(m);
    }

    let aposteriori_b_error = b_input.map(|b0| {
        let num: f64 = bg.iter().zip(&b0).map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = b0.iter().map(|v| v.norm_sqr()).sum();
        if den == 0.0 {
            num.sqrt()
        } else {
            (num / den).sqrt()
        }
    });
    let mut all_warnings = monitor.warnings;
    all_warnings.extend(warnings);

    Ok(SolveReport {
        x,
        sigma,
        flops: flops.total(),
        peak_workspace: ws.peak(),
        aposteriori_b_error,
        warnings: all_warnings,
    })
}
