//! Shared fixtures for the solver benchmarks.

use sgko_core::{generate_problem, CauchyLikeGenerators, DenseMatrix, ProblemId, ProblemMatrix, ProblemSpec, TrummerMatrix};

/// Sizes swept by the solver benchmarks; the largest no longer fits the
/// `n^2` factor in a typical L2 cache.
pub const SIZES: [usize; 3] = [256, 1024, 2048];

/// The well-conditioned Cauchy-like problem `p1` with its right-hand side.
pub fn cauchy_instance(n: usize) -> (CauchyLikeGenerators, DenseMatrix) {
    let p = generate_problem(&ProblemSpec::new(ProblemId::P1, n)).expect("p1 is valid for n >= 1");
    match p.matrix {
        ProblemMatrix::Cauchy(gen) => (gen, p.rhs),
        _ => unreachable!("p1 is Cauchy-like"),
    }
}

/// The Trummer-like problem `t1` with its right-hand side.
pub fn trummer_instance(n: usize) -> (TrummerMatrix, DenseMatrix) {
    let p = generate_problem(&ProblemSpec::new(ProblemId::T1, n)).expect("t1 is valid for n >= 1");
    match p.matrix {
        ProblemMatrix::Trummer(t) => (t, p.rhs),
        _ => unreachable!("t1 is Trummer-like"),
    }
}
