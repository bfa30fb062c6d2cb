use thiserror::Error;

/// Errors raised by geometric queries, constructions and simulations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point must have at least one coordinate")]
    EmptyPoint,

    #[error("non-finite coordinate")]
    NonFinite,

    #[error("empty input")]
    EmptyInput,

    #[error("half-space base and witness coincide")]
    DegenerateHalfSpace,

    #[error("no IVT crossing: distance minus one does not change sign")]
    NoCrossing,

    #[error("degenerate simplex: vertices are not affinely independent")]
    DegenerateSimplex,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point lies outside the body")]
    OutsideBody,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("graph is not connected: {0}")]
    Disconnected(String),

    #[error("grid too large: {nodes} nodes exceeds cap {cap}")]
    GridTooLarge { nodes: usize, cap: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
