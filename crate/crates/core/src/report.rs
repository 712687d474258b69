use crate::dense::DenseMatrix;

/// Outcome of a structured solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Solution block, `n x m`, in the natural order of the unknowns.
    pub x: DenseMatrix,
    /// `sigma[k]` is the original row chosen as pivot row at step `k`
    /// (zero-based).
    pub sigma: Vec<usize>,
    /// Counted complex operations (see [`crate::accounting`]).
    pub flops: u64,
    /// Peak scratch allocation in complex slots.
    pub peak_workspace: usize,
    /// `‖B_final - B_input‖_F / ‖B_input‖_F` for the downdating solvers when
    /// the check is enabled.
    pub aposteriori_b_error: Option<f64>,
    pub warnings: Vec<SolveWarning>,
}

/// Non-fatal conditions met during a solve.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveWarning {
    /// Pivot magnitude at or below the configured threshold relative to the
    /// largest pivot seen so far.
    SmallPivot { step: usize, magnitude: f64 },
    /// A Trummer diagonal entry was refreshed from generators across a node
    /// gap below the configured tolerance.
    CloseNodeRefresh { step: usize, row: usize, gap: f64 },
}

/// Knobs shared by all solvers. `Default` gives the production settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Partial pivoting. Turning it off is meant for tests that compare
    /// against unpivoted factorizations.
    pub pivoting: bool,
    /// Pivots with `|p| <= factor·eps·max_k |p_k|` raise a warning.
    pub small_pivot_factor: f64,
    /// Keep a copy of `B` (`n·r` extra slots) to report the a-posteriori
    /// generator error. Only the downdating solvers use it.
    pub aposteriori_check: bool,
    /// Absolute node gap under which a Trummer diagonal refresh is flagged.
    pub node_gap_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            pivoting: true,
            small_pivot_factor: 1e2,
            aposteriori_check: true,
            node_gap_tol: 1e-8,
        }
    }
}

impl SolveOptions {
    /// Production settings minus every optional allocation.
    pub fn minimal_memory() -> Self {
        Self {
            aposteriori_check: false,
            ..Self::default()
        }
    }

    pub fn without_pivoting() -> Self {
        Self {
            pivoting: false,
            ..Self::default()
        }
    }
}

/// Tracks the running pivot scale for small-pivot warnings.
#[derive(Debug, Default)]
pub(crate) struct PivotMonitor {
    largest: f64,
    factor: f64,
    pub(crate) warnings: Vec<SolveWarning>,
}

impl PivotMonitor {
    pub(crate) fn new(opts: &SolveOptions) -> Self {
        Self {
            largest: 0.0,
            factor: opts.small_pivot_factor,
            warnings: Vec::new(),
        }
    }

    pub(crate) fn observe(&mut self, step: usize, magnitude: f64) {
        self.largest = self.largest.max(magnitude);
        if magnitude <= self.factor * f64::EPSILON * self.largest {
            self.warnings.push(SolveWarning::SmallPivot { step, magnitude });
        }
    }
}
