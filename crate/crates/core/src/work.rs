//! Mutable copies of the generators that the elimination sweeps overwrite.

use crate::cauchy::CauchyLikeGenerators;
use crate::kernels::{dot, swap_chunks};
use crate::C64;

pub(crate) struct WorkGenerators {
    pub(crate) r: usize,
    /// Row-major `n x r`.
    pub(crate) g: Vec<C64>,
    /// Column-major `r x n`.
    pub(crate) b: Vec<C64>,
    pub(crate) t: Vec<C64>,
    pub(crate) s: Vec<C64>,
}

impl WorkGenerators {
    pub(crate) fn from_cauchy(gen: &CauchyLikeGenerators) -> Self {
        Self {
            r: gen.rank(),
            g: gen.g_storage().to_vec(),
            b: gen.b_storage().to_vec(),
            t: gen.t().to_vec(),
            s: gen.s().to_vec(),
        }
    }

    #[inline]
    pub(crate) fn g_row(&self, i: usize) -> &[C64] {
        &self.g[i * self.r..(i + 1) * self.r]
    }

    #[inline]
    pub(crate) fn b_col(&self, j: usize) -> &[C64] {
        &self.b[j * self.r..(j + 1) * self.r]
    }

    /// `G[i, :]·B[:, j]`
    #[inline]
    pub(crate) fn gb(&self, i: usize, j: usize) -> C64 {
        dot(self.g_row(i), self.b_col(j))
    }

    pub(crate) fn swap_g_rows(&mut self, a: usize, b: usize) {
        swap_chunks(&mut self.g, self.r, a, b);
    }
}
