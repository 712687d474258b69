//! Timed runs of the solvers on the problem suites, with error metrics.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::dense::{dense_inverse, relative_error, relative_error_vec, DenseMatrix};
use crate::error::{Error, Result};
use crate::gko_dense::solve_implicit_l_with;
use crate::gko_downdate::solve_downdating_with;
use crate::gko_extended::solve_extended_with;
use crate::problems::{
    generate_problem, identity_trummer, t2_exact_inverse, Problem, ProblemId, ProblemMatrix, ProblemSpec,
};
use crate::report::{SolveOptions, SolveReport};
use crate::trummer::{trummer_invert_with, trummer_reconstruct_dense, trummer_solve_with, TrummerMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Solver {
    /// `O(n^2)`-space elimination keeping `U`.
    Classic,
    Extended,
    Downdating,
    /// Downdating solver for Trummer-like matrices.
    Trummer,
}

impl Solver {
    pub const ALL: [Solver; 4] = [Self::Classic, Self::Extended, Self::Downdating, Self::Trummer];
    pub const CAUCHY: [Solver; 3] = [Self::Classic, Self::Extended, Self::Downdating];

    pub fn name(self) -> &'static str {
        match self {
            Self::Classic => "classic",
            Self::Extended => "extended",
            Self::Downdating => "downdating",
            Self::Trummer => "trummer",
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidProblem(format!("unknown solver {s:?}")))
    }
}

/// Solves the problem with `solver`, mapping a Toeplitz problem through its
/// Cauchy-like image and back. The returned `x` is in the original frame.
pub fn solve_problem(problem: &Problem, solver: Solver, opts: &SolveOptions) -> Result<SolveReport> {
    let unsupported = || {
        Err(Error::InvalidProblem(format!(
            "solver {solver} does not support problem {}",
            problem.spec.id
        )))
    };
    match (&problem.matrix, solver) {
        (ProblemMatrix::Trummer(t), Solver::Trummer) => trummer_solve_with(t, &problem.rhs, opts),
        (ProblemMatrix::Trummer(_), _) | (_, Solver::Trummer) => unsupported(),
        (ProblemMatrix::Cauchy(gen), s) => cauchy_solve(gen, &problem.rhs, s, opts),
        (ProblemMatrix::Toeplitz { gen, transform, .. }, s) => {
            let bhat = transform.forward_rhs(&problem.rhs)?;
            let mut rep = cauchy_solve(gen, &bhat, s, opts)?;
            rep.x = transform.backward_solution(&rep.x)?;
            Ok(rep)
        }
    }
}

fn cauchy_solve(
    gen: &crate::cauchy::CauchyLikeGenerators,
    b: &DenseMatrix,
    solver: Solver,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    match solver {
        Solver::Classic => solve_implicit_l_with(gen, b, opts).map(|(rep, _)| rep),
        Solver::Extended => solve_extended_with(gen, b, opts),
        Solver::Downdating => solve_downdating_with(gen, b, opts),
        Solver::Trummer => unreachable!("filtered by the caller"),
    }
}

/// One row of the solve benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub problem: ProblemId,
    pub n: usize,
    pub solver: Solver,
    /// Median wall time of the timed repeats.
    pub seconds: f64,
    /// `‖x - e‖_F / ‖e‖_F`
    pub fwd_err: f64,
    /// `‖A x - b‖_F / ‖b‖_F`
    pub residual: f64,
    /// Generator restoration error of the downdating solvers.
    pub apost_err: Option<f64>,
    pub flops: u64,
    pub workspace: usize,
    /// Set when the solve failed; the metrics are then NaN or zero.
    pub error: Option<Error>,
}

impl BenchRecord {
    fn failed(spec: &ProblemSpec, solver: Solver, err: Error) -> Self {
        Self {
            problem: spec.id,
            n: spec.n,
            solver,
            seconds: f64::NAN,
            fwd_err: f64::NAN,
            residual: f64::NAN,
            apost_err: None,
            flops: 0,
            workspace: 0,
            error: Some(err),
        }
    }
}

/// Median of a non-empty sample.
pub fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let k = samples.len();
    if k % 2 == 1 {
        samples[k / 2]
    } else {
        0.5 * (samples[k / 2 - 1] + samples[k / 2])
    }
}

fn problem_for(spec: &ProblemSpec, solver: Solver) -> Result<Problem> {
    let mut problem = generate_problem(spec)?;
    if spec.id == ProblemId::Identity && solver == Solver::Trummer {
        problem.matrix = ProblemMatrix::Trummer(identity_trummer(spec.n)?);
    }
    Ok(problem)
}

/// Generates the problem, runs one discarded warm-up solve and `repeats`
/// timed solves (at least one), and measures the last solution. Failures are
/// reported in the record rather than returned.
pub fn run_bench(spec: &ProblemSpec, solver: Solver, repeats: usize) -> BenchRecord {
    run_bench_with(spec, solver, repeats, &SolveOptions::default())
}

pub fn run_bench_with(spec: &ProblemSpec, solver: Solver, repeats: usize, opts: &SolveOptions) -> BenchRecord {
    let run = || -> Result<BenchRecord> {
        let problem = problem_for(spec, solver)?;
        solve_problem(&problem, solver, opts)?;
        let mut times = Vec::with_capacity(repeats.max(1));
        let mut report = None;
        for _ in 0..repeats.max(1) {
            let start = Instant::now();
            let rep = solve_problem(&problem, solver, opts)?;
            times.push(start.elapsed().as_secs_f64());
            report = Some(rep);
        }
        let rep = report.expect("at least one timed run");
        let residual = relative_error(&problem.apply(&rep.x)?, &problem.rhs);
        Ok(BenchRecord {
            problem: spec.id,
            n: spec.n,
            solver,
            seconds: median(&mut times),
            fwd_err: relative_error(&rep.x, &problem.exact),
            residual,
            apost_err: rep.aposteriori_b_error,
            flops: rep.flops,
            workspace: rep.peak_workspace,
            error: None,
        })
    };
    run().unwrap_or_else(|e| BenchRecord::failed(spec, solver, e))
}

/// Accuracy of a structured inverse against a reference inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct InvertRecord {
    pub problem: ProblemId,
    pub n: usize,
    pub eps: f64,
    pub seconds: f64,
    /// Relative error of the diagonal.
    pub e1: f64,
    /// Sum of the relative errors of the two generators.
    pub e2: f64,
    /// Relative error of the dense inverse.
    pub e3: f64,
    pub flops: u64,
    pub workspace: usize,
}

/// Inverts a Trummer problem (`t1`, `t2` or the identity) and compares with
/// a dense inverse (`t1`), the closed form (`t2`) or `I`.
pub fn run_invert_bench(spec: &ProblemSpec) -> Result<InvertRecord> {
    let t = match spec.id {
        ProblemId::Identity => identity_trummer(spec.n)?,
        id if id.is_trummer() => match generate_problem(spec)?.matrix {
            ProblemMatrix::Trummer(t) => t,
            _ => unreachable!("Trummer ids generate Trummer matrices"),
        },
        id => return Err(Error::InvalidProblem(format!("problem {id} is not Trummer-like"))),
    };
    let reference = match spec.id {
        ProblemId::T1 => dense_inverse(&trummer_reconstruct_dense(&t))?,
        ProblemId::T2 => t2_exact_inverse(spec.n, spec.eps),
        _ => DenseMatrix::identity(spec.n),
    };

    let start = Instant::now();
    let res = trummer_invert_with(&t, None, None, &SolveOptions::default())?;
    let seconds = start.elapsed().as_secs_f64();
    let (e1, e2, e3) = inverse_errors(&t, &res.inverse, &reference)?;
    Ok(InvertRecord {
        problem: spec.id,
        n: spec.n,
        eps: spec.eps,
        seconds,
        e1,
        e2,
        e3,
        flops: res.flops,
        workspace: res.peak_workspace,
    })
}

/// Diagonal, generator and dense errors of `computed` against `reference`
/// (the dense inverse of `t`). Reference generators are `T^{-1}G` and
/// `-B T^{-1}`.
pub fn inverse_errors(t: &TrummerMatrix, computed: &TrummerMatrix, reference: &DenseMatrix) -> Result<(f64, f64, f64)> {
    let e1 = relative_error_vec(computed.d(), &reference.diagonal());
    let g_ref = reference.matmul(&t.g_matrix())?;
    let b_ref = t.b_matrix().matmul(reference)?.scale(crate::C64::new(-1.0, 0.0));
    let e2 = relative_error(&computed.g_matrix(), &g_ref) + relative_error(&computed.b_matrix(), &b_ref);
    let e3 = relative_error(&trummer_reconstruct_dense(computed), reference);
    Ok((e1, e2, e3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even_samples() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn identity_is_solved_exactly() {
        for solver in Solver::ALL {
            let rec = run_bench(&ProblemSpec::new(ProblemId::Identity, 32), solver, 1);
            assert!(rec.error.is_none(), "{solver}");
            assert!(rec.fwd_err < 1e-14 && rec.residual < 1e-14, "{solver}: {rec:?}");
        }
        let inv = run_invert_bench(&ProblemSpec::new(ProblemId::Identity, 16)).unwrap();
        assert_eq!((inv.e1, inv.e2, inv.e3), (0.0, 0.0, 0.0));
    }

    #[test]
    fn unsupported_pairs_become_failed_rows() {
        let rec = run_bench(&ProblemSpec::new(ProblemId::T1, 8), Solver::Classic, 1);
        assert_eq!(rec.error.as_ref().map(Error::kind), Some("invalid_problem"));
        assert!(rec.fwd_err.is_nan());
        assert!(run_invert_bench(&ProblemSpec::new(ProblemId::P1, 8)).is_err());
    }

    #[test]
    fn small_suite_is_accurate() {
        for solver in Solver::CAUCHY {
            let rec = run_bench(&ProblemSpec::new(ProblemId::P1, 64), solver, 1);
            assert!(rec.fwd_err < 1e-13, "{rec:?}");
        }
        let rec = run_bench(&ProblemSpec::new(ProblemId::T1, 64), Solver::Trummer, 1);
        assert!(rec.fwd_err < 1e-12, "{rec:?}");
        let inv = run_invert_bench(&ProblemSpec::new(ProblemId::T2, 64)).unwrap();
        assert!(inv.e3 < 1e-9, "{inv:?}");
    }

    #[test]
    fn errors_and_flops_are_deterministic() {
        let spec = ProblemSpec::new(ProblemId::P4, 48).with_seed(9);
        let a = run_bench(&spec, Solver::Extended, 1);
        let b = run_bench(&spec, Solver::Extended, 1);
        assert_eq!((a.fwd_err, a.residual, a.flops), (b.fwd_err, b.residual, b.flops));
    }
}
