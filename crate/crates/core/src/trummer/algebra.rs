//! Sums, products and the inverse displacement identity for Trummer-like
//! matrices sharing one node vector.

use super::matrix::{trummer_matvec, trummer_reconstruct_dense, trummer_vecmat, TrummerMatrix};
use crate::dense::{dense_inverse, DenseMatrix};
use crate::error::{Error, Result};
use crate::C64;

fn same_nodes(a: &TrummerMatrix, b: &TrummerMatrix) -> Result<()> {
    if a.s() != b.s() {
        return Err(Error::NodeMismatch);
    }
    Ok(())
}

/// `A + B`: generators `[G_A, G_B]`, `[B_A; B_B]`, diagonal `d_A + d_B`.
pub fn trummer_add(a: &TrummerMatrix, b: &TrummerMatrix) -> Result<TrummerMatrix> {
    same_nodes(a, b)?;
    let n = a.n();
    let (ra, rb) = (a.rank(), b.rank());
    let mut g = Vec::with_capacity(n * (ra + rb));
    let mut bc = Vec::with_capacity(n * (ra + rb));
    for i in 0..n {
        g.extend_from_slice(a.g_row(i));
        g.extend_from_slice(b.g_row(i));
        bc.extend_from_slice(a.b_col(i));
        bc.extend_from_slice(b.b_col(i));
    }
    let d = a.d().iter().zip(b.d()).map(|(x, y)| x + y).collect();
    TrummerMatrix::from_parts(n, ra + rb, g, bc, a.s().to_vec(), d)
}

/// `A·B`: generators `[A·G_B, G_A]` and `[B_B; B_A·B]`.
///
/// Each diagonal entry is the product of one reconstructed row of `A` with
/// one reconstructed column of `B`.
pub fn trummer_mul(a: &TrummerMatrix, b: &TrummerMatrix) -> Result<TrummerMatrix> {
    same_nodes(a, b)?;
    let n = a.n();
    let (ra, rb) = (a.rank(), b.rank());
    let r = ra + rb;

    let mut a_gb = vec![C64::new(0.0, 0.0); n * rb];
    for l in 0..rb {
        let col: Vec<C64> = (0..n).map(|i| b.g_row(i)[l]).collect();
        for (i, v) in trummer_matvec(a, &col)?.into_iter().enumerate() {
            a_gb[i * rb + l] = v;
        }
    }
    let mut ba_b = vec![C64::new(0.0, 0.0); n * ra];
    for l in 0..ra {
        let row: Vec<C64> = (0..n).map(|j| a.b_col(j)[l]).collect();
        for (j, v) in trummer_vecmat(&row, b)?.into_iter().enumerate() {
            ba_b[j * ra + l] = v;
        }
    }

    let mut g = Vec::with_capacity(n * r);
    let mut bc = Vec::with_capacity(n * r);
    for i in 0..n {
        g.extend_from_slice(&a_gb[i * rb..(i + 1) * rb]);
        g.extend_from_slice(a.g_row(i));
        bc.extend_from_slice(b.b_col(i));
        bc.extend_from_slice(&ba_b[i * ra..(i + 1) * ra]);
    }
    let d = (0..n)
        .map(|i| (0..n).map(|j| a.entry(i, j) * b.entry(j, i)).sum())
        .collect();
    TrummerMatrix::from_parts(n, r, g, bc, a.s().to_vec(), d)
}

/// `‖∇_s(T^{-1}) + T^{-1}·G·B·T^{-1}‖_F` computed on dense matrices, where
/// `∇_s(M) = diag(s)·M - M·diag(s)`. Meant for small `n`.
pub fn displacement_of_inverse_check(t: &TrummerMatrix) -> Result<f64> {
    let inv = dense_inverse(&trummer_reconstruct_dense(t))?;
    let lhs = inv.displacement(t.s(), t.s())?;
    let gb = t.g_matrix().matmul(&t.b_matrix())?;
    let rhs = inv.matmul(&gb)?.matmul(&inv)?;
    Ok(lhs.add(&rhs)?.frobenius_norm())
}

/// `∇_s(M)` of a dense matrix.
pub fn trummer_displacement(m: &DenseMatrix, s: &[C64]) -> Result<DenseMatrix> {
    m.displacement(s, s)
}
