//! Error type shared across the library.

use thiserror::Error;

/// Errors produced by model construction, inference, and estimation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An event sequence violates its structural invariants.
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    /// Maximum-likelihood estimation failed.
    #[error("estimation error: {0}")]
    Estimation(String),

    /// A metric is undefined for the given data.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// A numeric routine failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
