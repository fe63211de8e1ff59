use thiserror::Error;

/// Errors raised when inputs break a structural precondition or when an
/// internal consistency check fails.
///
/// Negative analysis outcomes (an assumption that does not hold, a system
/// that is not realizable) are *not* errors; they are reported through
/// verdict types.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("not the adjacency matrix of a line digraph: {0}")]
    NotLineDigraph(String),

    #[error("invalid vertex block: {0}")]
    InvalidBlock(String),

    #[error("wrong vertex kind: {0}")]
    WrongVertexKind(String),

    #[error("not strictly hyperbolic: {0}")]
    NotStrictlyHyperbolic(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("enumeration bounds exceeded: {0}")]
    BoundsExceeded(String),

    #[error("{location}: {message}")]
    Input { location: String, message: String },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
