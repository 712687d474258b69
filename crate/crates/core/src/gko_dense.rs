//! Classic GKO elimination with `O(n^2)` storage: the explicit LU
//! factorization and the solver that keeps `L` implicit but stores `U`.

use crate::accounting::{FlopCounter, Workspace};
use crate::cauchy::CauchyLikeGenerators;
use crate::dense::{split_lu, DenseMatrix};
use crate::error::{Error, Result};
use crate::kernels::{argmax_abs, scale_into, sub_scaled};
use crate::report::{PivotMonitor, SolveOptions, SolveReport};
use crate::work::WorkGenerators;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// `L` and `U` sharing one `n x n` array: unit lower triangle strictly
/// below the diagonal, `U` on and above it.
#[derive(Debug, Clone)]
pub struct LUFactors {
    pub lu: DenseMatrix,
    /// Row order; always the identity since this factorization does not pivot.
    pub sigma: Vec<usize>,
    pub flops: u64,
    pub peak_workspace: usize,
}

impl LUFactors {
    pub fn l(&self) -> DenseMatrix {
        split_lu(&self.lu).0
    }

    pub fn u(&self) -> DenseMatrix {
        split_lu(&self.lu).1
    }
}

/// Unpivoted LU factorization driven by the Schur-complement generator
/// recursion `G <- G - l·G_k/p`, `B <- B - B_k·u/p`.
pub fn lu_factor(gen: &CauchyLikeGenerators) -> Result<LUFactors> {
    gen.require_reconstructible()?;
    let n = gen.n();
    let r = gen.rank();
    let mut w = WorkGenerators::from_cauchy(gen);
    let mut flops = FlopCounter::new();
    let mut ws = Workspace::new();
    let mut lu = DenseMatrix::zeros(n, n);
    ws.alloc(n * n);
    let mut tmp_g = vec![ZERO; r];
    let mut tmp_b = vec![ZERO; r];
    ws.alloc(2 * r);

    for k in 0..n - 1 {
        for l in k..n {
            lu[(k, l)] = w.gb(k, l) / (w.t[k] - w.s[l]);
        }
        flops.entries(n - k, r);
        let p = lu[(k, k)];
        if p == ZERO {
            return Err(Error::SingularMatrix { step: k });
        }
        let pinv = p.inv();
        for l in k + 1..n {
            lu[(l, k)] = pinv * (w.gb(l, k) / (w.t[l] - w.s[k]));
        }
        flops.entries(n - k - 1, r);
        flops.add(n - k);

        scale_into(&mut tmp_g, C64::new(1.0, 0.0), w.g_row(k));
        scale_into(&mut tmp_b, pinv, w.b_col(k));
        flops.add(r);
        for l in k + 1..n {
            let lk = lu[(l, k)];
            sub_scaled(&mut w.g[l * r..(l + 1) * r], lk, &tmp_g);
            let ukl = lu[(k, l)];
            sub_scaled(&mut w.b[l * r..(l + 1) * r], ukl, &tmp_b);
        }
        flops.axpys(2 * (n - k - 1), r);
    }
    lu[(n - 1, n - 1)] = w.gb(n - 1, n - 1) / (w.t[n - 1] - w.s[n - 1]);
    flops.entries(1, r);
    if lu[(n - 1, n - 1)] == ZERO {
        return Err(Error::SingularMatrix { step: n - 1 });
    }

    Ok(LUFactors {
        lu,
        sigma: (0..n).collect(),
        flops: flops.total(),
        peak_workspace: ws.peak(),
    })
}

/// Solves `C x = b` with partial pivoting, computing `L^{-1} b` on the fly
/// and storing only `U` (`n^2` slots) for the back-substitution.
pub fn solve_implicit_l(gen: &CauchyLikeGenerators, b: &DenseMatrix) -> Result<SolveReport> {
    solve_implicit_l_with(gen, b, &SolveOptions::default()).map(|(rep, _)| rep)
}

/// Like [`solve_implicit_l`]; also returns the pivot values `U[k, k]`.
pub fn solve_implicit_l_with(
    gen: &CauchyLikeGenerators,
    b: &DenseMatrix,
    opts: &SolveOptions,
) -> Result<(SolveReport, Vec<C64>)> {
    gen.require_reconstructible()?;
    let n = gen.n();
    let r = gen.rank();
    check_rhs(n, b)?;
    let m = b.cols();

    let mut w = WorkGenerators::from_cauchy(gen);
    let mut x = b.clone();
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut flops = FlopCounter::new();
    let mut ws = Workspace::new();
    let mut monitor = PivotMonitor::new(opts);

    let mut u = vec![ZERO; n * n];
    let mut lvec = vec![ZERO; n];
    let mut tmp_x = vec![ZERO; m];
    let mut tmp_g = vec![ZERO; r];
    let mut tmp_b = vec![ZERO; r];
    ws.alloc(n * n + n + m + 2 * r);

    for k in 0..n - 1 {
        for l in k..n {
            lvec[l] = w.gb(l, k) / (w.t[l] - w.s[k]);
        }
        flops.entries(n - k, r);

        let q = if opts.pivoting { argmax_abs(&lvec, k).0 } else { k };
        let p = lvec[q];
        if p == ZERO {
            return Err(Error::SingularMatrix { step: k });
        }
        monitor.observe(k, p.norm());
        lvec.swap(k, q);
        x.swap_rows(k, q);
        w.swap_g_rows(k, q);
        w.t.swap(k, q);
        sigma.swap(k, q);

        let urow = &mut u[k * n..(k + 1) * n];
        urow[k] = p;
        let pinv = p.inv();
        scale_into(&mut tmp_b, pinv, w.b_col(k));
        flops.add(1 + r);
        for l in k + 1..n {
            let ukl = w.gb(k, l) / (w.t[k] - w.s[l]);
            urow[l] = ukl;
            sub_scaled(&mut w.b[l * r..(l + 1) * r], ukl, &tmp_b);
        }
        flops.entries(n - k - 1, r);
        flops.axpys(n - k - 1, r);

        scale_into(&mut tmp_x, pinv, x.row(k));
        scale_into(&mut tmp_g, pinv, w.g_row(k));
        flops.add(m + r);
        for l in k + 1..n {
            let ll = lvec[l];
            sub_scaled(x.row_mut(l), ll, &tmp_x);
            sub_scaled(&mut w.g[l * r..(l + 1) * r], ll, &tmp_g);
        }
        flops.axpys(n - k - 1, m + r);
    }

    let last = n - 1;
    let unn = w.gb(last, last) / (w.t[last] - w.s[last]);
    flops.entries(1, r);
    if unn == ZERO {
        return Err(Error::SingularMatrix { step: last });
    }
    monitor.observe(last, unn.norm());
    u[last * n + last] = unn;

    // back-substitution
    for k in (0..n).rev() {
        let urow = &u[k * n..(k + 1) * n];
        for l in k + 1..n {
            let (xl, xk) = row_pair(&mut x, l, k);
            sub_scaled(xk, urow[l], xl);
        }
        flops.axpys(n - k - 1, m);
        let dinv = urow[k].inv();
        x.row_mut(k).iter_mut().for_each(|v| *v *= dinv);
        flops.add(1 + m);
    }

    let pivots = (0..n).map(|k| u[k * n + k]).collect();
    let report = SolveReport {
        x,
        sigma,
        flops: flops.total(),
        peak_workspace: ws.peak(),
        aposteriori_b_error: None,
        warnings: monitor.warnings,
    };
    Ok((report, pivots))
}

pub(crate) fn check_rhs(n: usize, b: &DenseMatrix) -> Result<()> {
    if b.rows() != n {
        return Err(Error::DimensionMismatch {
            what: "right-hand side",
            expected: (n, b.cols()),
            got: b.shape(),
        });
    }
    Ok(())
}

/// `(x[src, :], &mut x[dst, :])` for `src != dst`.
#[inline]
pub(crate) fn row_pair(x: &mut DenseMatrix, src: usize, dst: usize) -> (&[C64], &mut [C64]) {
    let m = x.cols();
    crate::kernels::chunk_pair(x.as_mut_slice(), m, src, dst)
}
