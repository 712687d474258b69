//! `O(n)`-space solver by downdating.
//!
//! The forward sweep is the pivoted GKO elimination with `U` discarded,
//! leaving `y = L^{-1} b` in `x`. The backward sweep then undoes the updates
//! of `B` one step at a time. Undoing step `k` needs only `G_k` and `B_k`,
//! which later steps never touch, and it yields row `k` of `U` through
//! `U[k, l] = G_k·B_l / (s_k - s_l)`. Back-substitution consumes each row as
//! soon as it appears, so `x` is finalized from the last component upwards.

use std::fmt::Display;

use crate::accounting::{FlopCounter, Workspace};
use crate::cauchy::CauchyLikeGenerators;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::gko_dense::check_rhs;
use crate::kernels::{add_scaled, argmax_abs, scale_in_place, scale_into, sub_scaled};
use crate::report::{PivotMonitor, SolveOptions, SolveReport};
use crate::work::WorkGenerators;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Callbacks fired while [`solve_downdating_observed`] runs. All methods
/// default to doing nothing.
pub trait DowndateObserver {
    /// The forward sweep and the last pivot are done.
    fn forward_done(&mut self) {}

    /// Row `k` of `U`, columns `k..n`, as recovered by the backward sweep.
    fn u_row(&mut self, _k: usize, _row: &[C64]) {}

    /// Columns `k+1..n` of `B` have been restored to their value before
    /// forward step `k`.
    fn b_downdated(&mut self, _k: usize) {}

    /// `x[k, :]` is final. Returning an error aborts the solve.
    fn solution_row(&mut self, _k: usize, _row: &[C64]) -> Result<(), String> {
        Ok(())
    }
}

struct Silent;

impl DowndateObserver for Silent {}

/// Solves `C x = b` by the downdating algorithm with default options.
pub fn solve_downdating(gen: &CauchyLikeGenerators, b: &DenseMatrix) -> Result<SolveReport> {
    solve_downdating_with(gen, b, &SolveOptions::default())
}

pub fn solve_downdating_with(
    gen: &CauchyLikeGenerators,
    b: &DenseMatrix,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    solve_downdating_observed(gen, b, opts, &mut Silent)
}

/// Like [`solve_downdating`], handing each final solution row to `sink` as
/// soon as it is known, in the order `n-1, n-2, ..., 0`.
///
/// An error from the sink stops the solve with [`Error::SinkAborted`].
pub fn solve_downdating_streaming<F, E>(
    gen: &CauchyLikeGenerators,
    b: &DenseMatrix,
    sink: F,
) -> Result<SolveReport>
where
    F: FnMut(usize, &[C64]) -> Result<(), E>,
    E: Display,
{
    struct Sink<F>(F);
    impl<F, E> DowndateObserver for Sink<F>
    where
        F: FnMut(usize, &[C64]) -> Result<(), E>,
        E: Display,
    {
        fn solution_row(&mut self, k: usize, row: &[C64]) -> Result<(), String> {
            (self.0)(k, row).map_err(|e| e.to_string())
        }
    }
    solve_downdating_observed(gen, b, &SolveOptions::default(), &mut Sink(sink))
}

pub fn solve_downdating_observed<O: DowndateObserver>(
    gen: &CauchyLikeGenerators,
    b: &DenseMatrix,
    opts: &SolveOptions,
    obs: &mut O,
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

    let b_input = if opts.aposteriori_check {
        ws.alloc(n * r);
        Some(w.b.clone())
    } else {
        None
    };
    let mut lvec = vec![ZERO; n];
    let mut u = vec![ZERO; n];
    let mut tmp_x = vec![ZERO; m];
    let mut tmp_g = vec![ZERO; r];
    let mut tmp_b = vec![ZERO; r];
    ws.alloc(2 * n + m + 2 * r);

    for k in 0..n - 1 {
        let sk = w.s[k];
        for l in k..n {
            lvec[l] = w.gb(l, k) / (w.t[l] - sk);
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
        u[k] = p;

        let pinv = p.inv();
        let tk = w.t[k];
        scale_into(&mut tmp_b, pinv, w.b_col(k));
        scale_into(&mut tmp_x, pinv, x.row(k));
        scale_into(&mut tmp_g, pinv, w.g_row(k));
        flops.add(1 + 2 * r + m);
        for l in k + 1..n {
            let ul = w.gb(k, l) / (tk - w.s[l]);
            sub_scaled(&mut w.b[l * r..(l + 1) * r], ul, &tmp_b);
            let ll = lvec[l];
            sub_scaled(x.row_mut(l), ll, &tmp_x);
            sub_scaled(&mut w.g[l * r..(l + 1) * r], ll, &tmp_g);
        }
        flops.entries(n - k - 1, r);
        flops.axpys(n - k - 1, 2 * r + m);
    }

    let last = n - 1;
    u[last] = w.gb(last, last) / (w.t[last] - w.s[last]);
    flops.entries(1, r);
    if u[last] == ZERO {
        return Err(Error::SingularMatrix { step: last });
    }
    monitor.observe(last, u[last].norm());
    obs.forward_done();
    obs.u_row(last, &u[last..]);
    scale_in_place(x.row_mut(last), u[last].inv());
    flops.add(1 + m);
    emit(obs, last, &x)?;

    for k in (0..last).rev() {
        let sk = w.s[k];
        let uk_inv = u[k].inv();
        scale_into(&mut tmp_b, uk_inv, w.b_col(k));
        tmp_x.copy_from_slice(x.row(k));
        flops.add(1 + r);
        for l in k + 1..n {
            let ul = w.gb(k, l) / (sk - w.s[l]);
            u[l] = ul;
            add_scaled(&mut w.b[l * r..(l + 1) * r], ul, &tmp_b);
            sub_scaled(&mut tmp_x, ul, x.row(l));
        }
        flops.entries(n - k - 1, r);
        flops.axpys(n - k - 1, r + m);
        obs.u_row(k, &u[k..]);
        obs.b_downdated(k);
        let xk = x.row_mut(k);
        scale_into(xk, uk_inv, &tmp_x);
        flops.add(m);
        emit(obs, k, &x)?;
    }

    let aposteriori_b_error = b_input.map(|b0| {
        let num: f64 = w.b.iter().zip(&b0).map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = b0.iter().map(|v| v.norm_sqr()).sum();
        if den == 0.0 {
            num.sqrt()
        } else {
            (num / den).sqrt()
        }
    });

    Ok(SolveReport {
        x,
        sigma,
        flops: flops.total(),
        peak_workspace: ws.peak(),
        aposteriori_b_error,
        warnings: monitor.warnings,
    })
}

fn emit<O: DowndateObserver>(obs: &mut O, k: usize, x: &DenseMatrix) -> Result<()> {
    obs.solution_row(k, x.row(k))
        .map_err(|message| Error::SinkAborted { row: k, message })
}
