//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by solvers, oracles and readers.
#[derive(Debug, Error)]
pub enum Error {
    /// Two points (or a point and an oracle) disagree on dimensions.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },

    /// An argument violated a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A configuration field is out of its admissible range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Invalid problem data (labels, duplicate entries, asymmetric matrix, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The away oracle was called on an empty active set.
    #[error("active set is empty")]
    EmptyActiveSet,

    /// The requested atom is not part of the active set.
    #[error("atom not in active set")]
    AtomNotActive,

    /// Line search asked to move along a zero direction.
    #[error("zero direction passed to line search")]
    ZeroDirection,

    /// The sufficient-decrease loop exceeded its evaluation cap, which
    /// signals a non-smooth or NaN-producing objective.
    #[error("backtracking diverged after {evals} objective evaluations")]
    BacktrackDiverged { evals: usize },

    /// Active-set algorithms cannot key rank-one atoms.
    #[error("rank-one atoms cannot be used with active-set algorithms")]
    RankOneActiveSet,

    /// The operation is not available for this constraint set.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Text-format parse failure.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
