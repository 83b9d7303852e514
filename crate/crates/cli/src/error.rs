use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] gentleboost::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot read config file {path}: {source}")]
    ConfigFile {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },

    #[error("conflicting results for dataset `{dataset}`, model `{model}`, seed {seed}")]
    Merge {
        dataset: String,
        model: String,
        seed: u64,
    },

    #[error("malformed results file {path}: {reason}")]
    Results { path: PathBuf, reason: String },

    #[error("snapshot format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u16, expected: u16 },

    #[error("corrupt snapshot: {0}")]
    Corrupt(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
