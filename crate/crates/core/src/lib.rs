//! Fast Gaussian elimination for Cauchy-like and Trummer-like matrices.
//!
//! A Cauchy-like matrix `C` is stored through its generators: `G` (`n x r`),
//! `B` (`r x n`) and node vectors `t`, `s` with
//! `diag(t)·C - C·diag(s) = G·B`. The solvers here eliminate on the
//! generators instead of the dense matrix:
//!
//! * [`solve_implicit_l`] keeps `U` in `n^2` slots,
//! * [`solve_extended`] and [`solve_downdating`] need `O(n)` extra slots,
//! * [`trummer_solve`] and [`trummer_invert`] handle the case `t = s`, where
//!   the diagonal is stored explicitly.

pub mod accounting;
pub mod bench;
pub mod cauchy;
pub mod dense;
pub mod error;
pub mod fixtures;
pub mod gko_dense;
pub mod gko_downdate;
pub mod gko_extended;
mod kernels;
pub mod problems;
pub mod report;
pub mod toeplitz;
pub mod trummer;
mod work;

#[cfg(test)]
mod properties;

pub use num_complex;

/// Complex double precision, the only scalar type used.
pub type C64 = num_complex::Complex64;

pub use accounting::{FlopCounter, Workspace};
pub use bench::{run_bench, run_bench_with, run_invert_bench, solve_problem, BenchRecord, InvertRecord, Solver};
pub use cauchy::{injectivity, singularity_witness, CauchyLikeGenerators, ValidationReport};
pub use dense::{dense_solve_oracle, relative_error, relative_error_vec, DenseMatrix};
pub use error::{Error, Result};
pub use gko_dense::{lu_factor, solve_implicit_l, solve_implicit_l_with, LUFactors};
#[cfg(feature = "probe")]
pub use gko_extended::extended_block_probe;
pub use gko_downdate::{
    solve_downdating, solve_downdating_observed, solve_downdating_streaming, solve_downdating_with,
    DowndateObserver,
};
pub use gko_extended::{solve_extended, solve_extended_with, BlockSnapshot};
pub use problems::{generate_problem, Problem, ProblemId, ProblemMatrix, ProblemSpec};
pub use report::{SolveOptions, SolveReport, SolveWarning};
pub use toeplitz::{gaussian_toeplitz, toeplitz_to_cauchy, ToeplitzOperator, ToeplitzTransform};
pub use trummer::{
    displacement_of_inverse_check, trummer_add, trummer_apply, trummer_displacement, trummer_invert,
    trummer_invert_with, trummer_matvec, trummer_mul, trummer_reconstruct_dense, trummer_solve, trummer_solve_with,
    trummer_vecmat, TrummerInverseResult, TrummerMatrix,
};
