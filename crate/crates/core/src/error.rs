use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must have positive determinant: {0}")]
    NonPositiveDeterminant(String),

    #[error("determinant mismatch: {left} vs {right}")]
    DeterminantMismatch { left: String, right: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("linear system too large at depth {depth}: {unknowns} unknowns, {equations} equations")]
    ResourceLimit {
        depth: usize,
        unknowns: usize,
        equations: usize,
    },

    #[error("no solution supported on the depth-{depth} closure for n = {n}; try a larger depth")]
    DepthExhausted { n: u64, depth: usize },

    /// A witness that failed exact re-verification. Always a bug, never a verdict.
    #[error("internal verification failure: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}
