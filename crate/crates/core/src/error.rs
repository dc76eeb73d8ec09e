//! Error type shared by every module.

use thiserror::Error;

/// Failure categories. The CLI maps these onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("infeasible input: {0}")]
    Infeasible(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("unsupported oracle: {0}")]
    UnsupportedOracle(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("rounding did not terminate within {iterations} iterations")]
    NonTermination {
        iterations: usize,
        trace: Vec<serde_json::Value>,
    },
    #[error("lp solver: {0}")]
    Solver(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn malformed<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Malformed(msg.into()))
}

pub(crate) fn infeasible<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Infeasible(msg.into()))
}
