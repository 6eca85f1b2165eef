//! Crate-wide error type.

use thiserror::Error;

/// Alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument violates a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested coefficients do not describe a nonnegative density.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// Input outside the domain `[0,1]` (or `(0,1)` for quantiles).
    #[error("domain error: {0}")]
    Domain(String),

    /// Two objects built on different partitions were combined.
    #[error("partition mismatch: {0}")]
    PartitionMismatch(String),

    /// No feasible scaling reaches the requested separation.
    #[error("infeasible target: {0}")]
    InfeasibleTarget(String),

    /// A structured configuration file failed validation.
    #[error("config error: {0}")]
    Config(String),

    /// A data file contained a malformed or out-of-range entry.
    #[error("{file}:{line}: {message}")]
    DataFile {
        file: String,
        line: usize,
        message: String,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
