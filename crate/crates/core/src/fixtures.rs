//! Seeded random instances for tests and benchmarks.
//!
//! All generators use `ChaCha8Rng` seeded from a `u64`, so equal seeds give
//! bit-identical instances on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cauchy::CauchyLikeGenerators;
use crate::dense::DenseMatrix;
use crate::trummer::TrummerMatrix;
use crate::C64;

fn uniform_complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// `rows x cols` matrix with real and imaginary parts uniform in `[-1, 1)`.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(rows, cols, |_, _| uniform_complex(&mut rng))
}

/// Cauchy-like generators with random `G`, `B` and interleaved real nodes
/// `s_j = j`, `t_i = i + 1/2 + 0.3i`, which keep the matrix well conditioned
/// for moderate `n`.
pub fn random_cauchy_like(n: usize, r: usize, seed: u64) -> CauchyLikeGenerators {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = (0..n * r).map(|_| uniform_complex(&mut rng)).collect();
    let b = (0..n * r).map(|_| uniform_complex(&mut rng)).collect();
    let s = (0..n).map(|j| C64::new(j as f64, 0.0)).collect();
    let t = (0..n).map(|i| C64::new(i as f64 + 0.5, 0.3)).collect();
    CauchyLikeGenerators::from_parts(n, r, g, b, t, s).expect("valid by construction")
}

/// A Trummer-like matrix with random generators satisfying
/// `G[i, :]·B[:, i] = 0` and a diagonal of modulus around `2 + r·ln n`.
///
/// For `r = 1` the compatibility condition is met by zeroing `G` on even
/// rows and `B` on odd columns.
pub fn random_trummer(n: usize, r: usize, seed: u64) -> TrummerMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7452_554d);
    let mut g: Vec<C64> = (0..n * r).map(|_| uniform_complex(&mut rng)).collect();
    let mut b: Vec<C64> = (0..n * r).map(|_| uniform_complex(&mut rng)).collect();
    for i in 0..n {
        if r == 1 {
            if i % 2 == 0 {
                g[i] = C64::new(0.0, 0.0);
            } else {
                b[i] = C64::new(0.0, 0.0);
            }
        } else {
            let head: C64 = (0..r - 1).map(|l| g[i * r + l] * b[i * r + l]).sum();
            let gl = g[i * r + r - 1];
            b[i * r + r - 1] = -head / gl;
        }
    }
    let scale = 2.0 + r as f64 * (n.max(2) as f64).ln();
    let d = (0..n)
        .map(|_| C64::from_polar(scale * rng.gen_range(1.0..2.0), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    let s = (0..n).map(|i| C64::new(i as f64 * 0.7, 0.0)).collect();
    TrummerMatrix::from_parts(n, r, g, b, s, d).expect("valid by construction")
}
