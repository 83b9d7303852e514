use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The caller asked for something that has no defined answer
    /// (empty input, pristine model where training was required, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// Input data violates a domain invariant.
    #[error("data error: {0}")]
    Data(String),

    /// Hyperparameters or configuration rejected before any work starts.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("metric undefined: {0}")]
    MetricUndefined(String),

    #[error("ingestion error in {path} at row {row}, column `{column}`: {reason}")]
    Ingest {
        path: PathBuf,
        row: usize,
        column: String,
        reason: String,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
