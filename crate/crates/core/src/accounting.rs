//! Operation and workspace accounting shared by all solvers.
//!
//! Counting convention: one unit per complex multiply, add, subtract or
//! divide. A generator entry `G_i·B_j / (t_i - s_j)` therefore costs
//! `2r + 1` units (r products, r - 1 sums, one subtraction, one division)
//! and an update `v -= a·w` over `k` entries costs `2k`. Magnitude
//! comparisons made during pivot search are not counted.
//!
//! Workspace is measured in complex slots allocated by a solver beyond its
//! inputs and outputs. Private copies of the generators and node vectors
//! stand in for the in-place overwriting of the inputs and are not charged.

/// Running operation counter. Solvers keep one per call; nothing is global.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct FlopCounter(u64);

impl FlopCounter {
    pub fn new() -> Self {
        Self(0)
    }

    #[inline]
    pub fn add(&mut self, ops: usize) {
        self.0 += ops as u64;
    }

    /// Cost of reconstructing `count` entries from rank-`r` generators.
    #[inline]
    pub fn entries(&mut self, count: usize, r: usize) {
        self.add(count * (2 * r + 1));
    }

    /// Cost of `count` updates of the form `v -= a·w` with `v, w` of length `len`.
    #[inline]
    pub fn axpys(&mut self, count: usize, len: usize) {
        self.add(2 * count * len);
    }

    pub fn total(&self) -> u64 {
        self.0
    }
}

/// Tracks live and peak scratch allocations, in complex slots.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Workspace {
    live: usize,
    peak: usize,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn alloc(&mut self, slots: usize) {
        self.live += slots;
        self.peak = self.peak.max(self.live);
    }

    pub fn release(&mut self, slots: usize) {
        self.live = self.live.saturating_sub(slots);
    }

    pub fn peak(&self) -> usize {
        self.peak
    }
}
