//! `O(n)`-space solver based on Gaussian elimination of the extended matrix
//! `[[C, b], [-I, 0]]`, whose Schur complement after `n` steps is
//! `x = C^{-1} b`.
//!
//! The first block column is Cauchy-like with row nodes `[t; s]` and column
//! nodes `s`, so only its generator rows are kept. At step `k` the live
//! rows are `k..n+k`; they are stored modulo `n`, so slot `i < k` holds
//! row `n + i` of the extended matrix and slot `i >= k` holds row `i`.

use crate::accounting::{FlopCounter, Workspace};
use crate::cauchy::CauchyLikeGenerators;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::gko_dense::{check_rhs, row_pair};
use crate::kernels::{argmax_abs, scale_in_place, sub_scaled};
use crate::report::{PivotMonitor, SolveOptions, SolveReport};
use crate::work::WorkGenerators;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Solves `C x = b` in `O(n)` extra space by eliminating the extended matrix.
///
/// Requires a fully reconstructible `C` and injective column nodes `s`.
pub fn solve_extended(gen: &CauchyLikeGenerators, b: &DenseMatrix) -> Result<SolveReport> {
    solve_extended_with(gen, b, &SolveOptions::default())
}

pub fn solve_extended_with(
    gen: &CauchyLikeGenerators,
    b: &DenseMatrix,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    run(gen, b, opts, &mut NoProbe)
}

/// Hooks into the elimination, used to materialize the block structure.
trait Probe {
    fn y_row(&mut self, _k: usize, _row: &[C64]) {}
    fn u_entry(&mut self, _k: usize, _l: usize, _value: C64) {}
    fn step_done(&mut self, _done: usize, _w: &WorkGenerators, _x: &DenseMatrix) {}
}

struct NoProbe;

impl Probe for NoProbe {}

fn run<P: Probe>(
    gen: &CauchyLikeGenerators,
    b: &DenseMatrix,
    opts: &SolveOptions,
    probe: &mut P,
) -> Result<SolveReport> {
    gen.require_reconstructible()?;
    gen.require_injective_s()?;
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
    let mut lvec = vec![ZERO; n];
    ws.alloc(n);
    probe.step_done(0, &w, &x);

    for k in 0..n - 1 {
        let sk = w.s[k];
        for l in 0..k {
            lvec[l] = w.gb(l, k) / (w.s[l] - sk);
        }
        for l in k..n {
            lvec[l] = w.gb(l, k) / (w.t[l] - sk);
        }
        flops.entries(n, r);

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
        probe.y_row(k, x.row(k));
        probe.u_entry(k, k, p);

        let pinv = p.inv();
        let tk = w.t[k];
        scale_in_place(&mut w.b[k * r..(k + 1) * r], pinv);
        flops.add(1 + r);
        for l in k + 1..n {
            let u = w.gb(k, l) / (tk - w.s[l]);
            probe.u_entry(k, l, u);
            let (bk, bl) = crate::kernels::chunk_pair(&mut w.b, r, k, l);
            sub_scaled(bl, u, bk);
        }
        flops.entries(n - k - 1, r);
        flops.axpys(n - k - 1, r);

        // slot k turns into row n + k: p^{-1} times the pivot row
        scale_in_place(x.row_mut(k), pinv);
        scale_in_place(&mut w.g[k * r..(k + 1) * r], pinv);
        flops.add(m + r);
        for l in (0..n).filter(|&l| l != k) {
            let ll = lvec[l];
            let (xk, xl) = row_pair(&mut x, k, l);
            sub_scaled(xl, ll, xk);
            let (gk, gl) = crate::kernels::chunk_pair(&mut w.g, r, k, l);
            sub_scaled(gl, ll, gk);
        }
        flops.axpys(n - 1, m + r);
        probe.step_done(k + 1, &w, &x);
    }

    let last = n - 1;
    let sn = w.s[last];
    for l in 0..last {
        lvec[l] = w.gb(l, last) / (w.s[l] - sn);
    }
    let p = w.gb(last, last) / (w.t[last] - sn);
    flops.entries(n, r);
    if p == ZERO {
        return Err(Error::SingularMatrix { step: last });
    }
    monitor.observe(last, p.norm());
    probe.y_row(last, x.row(last));
    probe.u_entry(last, last, p);
    scale_in_place(x.row_mut(last), p.inv());
    flops.add(1 + m);
    for l in 0..last {
        let (xn, xl) = row_pair(&mut x, last, l);
        sub_scaled(xl, lvec[l], xn);
    }
    flops.axpys(last, m);
    probe.step_done(n, &w, &x);

    Ok(SolveReport {
        x,
        sigma,
        flops: flops.total(),
        peak_workspace: ws.peak(),
        aposteriori_b_error: None,
        warnings: monitor.warnings,
    })
}

/// The four blocks of the extended matrix `[[C, b], [-I, 0]]` after a given
/// number of elimination steps without pivoting. Rows that have already
/// served as pivot rows keep their value at the time they were used.
#[derive(Debug, Clone)]
pub struct BlockSnapshot {
    pub steps: usize,
    pub c11: DenseMatrix,
    pub c12: DenseMatrix,
    pub c21: DenseMatrix,
    pub c22: DenseMatrix,
}

/// Runs the extended-matrix elimination without pivoting and materializes
/// its four blocks after `steps` steps (`0 <= steps <= n`).
///
/// This allocates `O(n^2)` storage and exists for inspecting the algorithm;
/// [`solve_extended`] never builds these blocks.
#[cfg(any(test, feature = "probe"))]
pub fn extended_block_probe(
    gen: &CauchyLikeGenerators,
    b: &DenseMatrix,
    steps: usize,
) -> Result<BlockSnapshot> {
    let n = gen.n();
    if steps > n {
        return Err(Error::InvalidProblem(format!("probe step {steps} exceeds n = {n}")));
    }
    let mut rec = Recorder {
        target: steps,
        u: DenseMatrix::zeros(n, n),
        y: DenseMatrix::zeros(n, b.cols()),
        snapshot: None,
    };
    run(gen, b, &SolveOptions::without_pivoting(), &mut rec)?;
    Ok(rec.snapshot.expect("every step count in 0..=n is visited"))
}

#[cfg(any(test, feature = "probe"))]
struct Recorder {
    target: usize,
    u: DenseMatrix,
    y: DenseMatrix,
    snapshot: Option<BlockSnapshot>,
}

#[cfg(any(test, feature = "probe"))]
impl Probe for Recorder {
    fn y_row(&mut self, k: usize, row: &[C64]) {
        self.y.row_mut(k).copy_from_slice(row);
    }

    fn u_entry(&mut self, k: usize, l: usize, value: C64) {
        self.u[(k, l)] = value;
    }

    fn step_done(&mut self, done: usize, w: &WorkGenerators, x: &DenseMatrix) {
        if done != self.target {
            return;
        }
        let n = w.t.len();
        let m = x.cols();
        let c11 = DenseMatrix::from_fn(n, n, |i, j| {
            if i < done {
                self.u[(i, j)]
            } else if j < done {
                ZERO
            } else {
                w.gb(i, j) / (w.t[i] - w.s[j])
            }
        });
        let c12 = DenseMatrix::from_fn(n, m, |i, j| if i < done { self.y[(i, j)] } else { x[(i, j)] });
        let c21 = DenseMatrix::from_fn(n, n, |i, j| {
            if i >= done {
                if i == j {
                    C64::new(-1.0, 0.0)
                } else {
                    ZERO
                }
            } else if j < done {
                ZERO
            } else {
                w.gb(i, j) / (w.s[i] - w.s[j])
            }
        });
        let c22 = DenseMatrix::from_fn(n, m, |i, j| if i < done { x[(i, j)] } else { ZERO });
        self.snapshot = Some(BlockSnapshot {
            steps: done,
            c11,
            c12,
            c21,
            c22,
        });
    }
}
