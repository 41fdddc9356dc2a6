use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or missing configuration value; `key` is the dotted key path.
    #[error("configuration error at `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("numeric failure at omega={omega}, sigma={sigma}, c={coupling}: {source}")]
    Numeric {
        omega: f64,
        sigma: f64,
        coupling: f64,
        #[source]
        source: opo_core::Error,
    },

    #[error(transparent)]
    Model(#[from] opo_core::Error),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// Process exit status: 1 for configuration, parameter and I/O problems,
    /// 2 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. }
            | CliError::Io { .. }
            | CliError::Model(opo_core::Error::Parameter { .. }) => 1,
            CliError::Numeric { .. }
            | CliError::Model(_)
            | CliError::Csv(_)
            | CliError::ThreadPool(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
