//! Small inner-loop helpers shared by the solvers.

use crate::C64;

#[inline]
pub(crate) fn dot(a: &[C64], b: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// `y -= alpha * x`
#[inline]
pub(crate) fn sub_scaled(y: &mut [C64], alpha: C64, x: &[C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi -= alpha * xi;
    }
}

/// `y += alpha * x`
#[inline]
pub(crate) fn add_scaled(y: &mut [C64], alpha: C64, x: &[C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[inline]
pub(crate) fn scale_into(dst: &mut [C64], alpha: C64, src: &[C64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = alpha * s;
    }
}

#[inline]
pub(crate) fn scale_in_place(v: &mut [C64], alpha: C64) {
    for x in v {
        *x *= alpha;
    }
}

/// Index of the first entry of largest modulus in `v[from..]`, with that
/// modulus. `v[from..]` must be non-empty.
#[inline]
pub(crate) fn argmax_abs(v: &[C64], from: usize) -> (usize, f64) {
    let mut q = from;
    let mut best = v[from].norm_sqr();
    for (i, x) in v.iter().enumerate().skip(from + 1) {
        let m = x.norm_sqr();
        if m > best {
            best = m;
            q = i;
        }
    }
    (q, best.sqrt())
}

/// Swaps two equally sized chunks `a` and `b` of a flat row-major buffer.
#[inline]
pub(crate) fn swap_chunks(buf: &mut [C64], width: usize, a: usize, b: usize) {
    if a == b || width == 0 {
        return;
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let (head, tail) = buf.split_at_mut(hi * width);
    head[lo * width..(lo + 1) * width].swap_with_slice(&mut tail[..width]);
}

/// Borrows chunk `k` immutably and chunk `j != k` mutably.
#[inline]
pub(crate) fn chunk_pair(buf: &mut [C64], width: usize, k: usize, j: usize) -> (&[C64], &mut [C64]) {
    debug_assert_ne!(k, j);
    if k < j {
        let (head, tail) = buf.split_at_mut(j * width);
        (&head[k * width..(k + 1) * width], &mut tail[..width])
    } else {
        let (head, tail) = buf.split_at_mut(k * width);
        (&tail[..width], &mut head[j * width..(j + 1) * width])
    }
}
