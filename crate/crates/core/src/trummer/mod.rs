//! Trummer-like matrices: `t = s` injective, diagonal stored explicitly.

mod algebra;
mod invert;
mod matrix;
mod solve;

pub use algebra::{displacement_of_inverse_check, trummer_add, trummer_displacement, trummer_mul};
pub use invert::{trummer_invert, trummer_invert_with, TrummerInverseResult};
pub use matrix::{trummer_apply, trummer_matvec, trummer_reconstruct_dense, trummer_vecmat, TrummerMatrix};
pub use solve::{trummer_solve, trummer_solve_with};
