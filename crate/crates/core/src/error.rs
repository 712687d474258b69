use thiserror::Error;

/// Errors raised by the structured solvers and their oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `t_i == s_j`: the entry cannot be recovered from the generators.
    #[error("node collision at ({row}, {col}): entry is not reconstructible")]
    NodeCollision { row: usize, col: usize },

    /// A node vector that must be injective repeats a value.
    #[error("node vector is not injective: entries {first} and {second} coincide")]
    NonInjectiveNodes { first: usize, second: usize },

    /// An exactly zero pivot was met at the given elimination step.
    #[error("singular matrix: zero pivot at step {step}")]
    SingularMatrix { step: usize },

    #[error("dimension mismatch for {what}: expected {expected:?}, got {got:?}")]
    DimensionMismatch {
        what: &'static str,
        expected: (usize, usize),
        got: (usize, usize),
    },

    /// Two Trummer-like operands do not share the same node vector.
    #[error("node vectors of the operands differ")]
    NodeMismatch,

    /// The streaming sink refused a solution row; the solve was abandoned.
    #[error("solution sink aborted at row {row}: {message}")]
    SinkAborted { row: usize, message: String },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

impl Error {
    /// Short stable identifier, used by the CLI for machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NodeCollision { .. } => "node_collision",
            Error::NonInjectiveNodes { .. } => "non_injective_nodes",
            Error::SingularMatrix { .. } => "singular_matrix",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NodeMismatch => "node_mismatch",
            Error::SinkAborted { .. } => "sink_aborted",
            Error::InvalidProblem(_) => "invalid_problem",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
