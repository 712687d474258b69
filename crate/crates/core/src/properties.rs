//! Randomized invariants of the solvers against an independent LU oracle.

use nalgebra::DMatrix;
use proptest::prelude::*;

use crate::fixtures::{random_cauchy_like, random_matrix, random_trummer};
use crate::{
    relative_error, solve_downdating_with, solve_extended, solve_implicit_l, toeplitz_to_cauchy, trummer_reconstruct_dense,
    trummer_solve, DenseMatrix, SolveOptions, ToeplitzOperator, C64,
};

fn to_na(a: &DenseMatrix) -> DMatrix<C64> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

fn from_na(a: &DMatrix<C64>) -> DenseMatrix {
    DenseMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn lu_oracle(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    from_na(&to_na(a).lu().solve(&to_na(b)).expect("nonsingular"))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cauchy_solvers_match_lu(n in 4usize..40, r in 1usize..4, m in 1usize..3, seed in any::<u64>()) {
        let gen = random_cauchy_like(n, r, seed);
        let b = random_matrix(n, m, seed.wrapping_add(1));
        let x = lu_oracle(&gen.reconstruct_dense().unwrap(), &b);
        let classic = solve_implicit_l(&gen, &b).unwrap().x;
        let extended = solve_extended(&gen, &b).unwrap().x;
        let down = solve_downdating_with(&gen, &b, &SolveOptions::default()).unwrap().x;
        for (name, y) in [("classic", &classic), ("extended", &extended), ("downdating", &down)] {
            prop_assert!(relative_error(y, &x) < 1e-9, "{name}: {}", relative_error(y, &x));
        }
    }

    #[test]
    fn downdating_restores_b(n in 4usize..40, r in 1usize..4, seed in any::<u64>()) {
        let gen = random_cauchy_like(n, r, seed);
        let b = random_matrix(n, 1, seed ^ 5);
        let rep = solve_downdating_with(&gen, &b, &SolveOptions::default()).unwrap();
        let err = rep.aposteriori_b_error.expect("restoration check enabled by default");
        prop_assert!(err < 1e-11, "{err}");
    }

    #[test]
    fn trummer_solve_matches_lu(n in 4usize..40, r in 1usize..4, seed in any::<u64>()) {
        let t = random_trummer(n, r, seed);
        prop_assert!(t.compatibility_defect() < 1e-13);
        let b = random_matrix(n, 1, seed ^ 9);
        let x = lu_oracle(&trummer_reconstruct_dense(&t), &b);
        let y = trummer_solve(&t, &b).unwrap().x;
        prop_assert!(relative_error(&y, &x) < 1e-9, "{}", relative_error(&y, &x));
    }

    #[test]
    fn toeplitz_image_matches_transform(n in 2usize..48, seed in any::<u64>()) {
        let v = random_matrix(2 * n - 1, 1, seed).into_vec();
        let col = v[..n].to_vec();
        let mut row = vec![v[0]];
        row.extend_from_slice(&v[n..]);
        let op = ToeplitzOperator::new(col, row).unwrap();
        let (gen, tr) = toeplitz_to_cauchy(&op).unwrap();
        let image = gen.reconstruct_dense().unwrap();
        let dense = op.to_dense();
        // Ω is symmetric, so F Ω = (Ω F^T)^T
        let f = tr.forward_rhs(&dense).unwrap();
        let expected = tr.backward_solution(&f.transpose()).unwrap().transpose();
        prop_assert!(relative_error(&image, &expected) < 1e-11, "{}", relative_error(&image, &expected));
    }
}
