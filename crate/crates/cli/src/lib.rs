//! Command-line front end: experiment batches, mode benchmarks, statistical
//! comparison of summaries and attainment-surface rendering.

pub mod args;
pub mod commands;
pub mod experiment;
pub mod output;

use std::path::PathBuf;

use islandfs_core::dataset::DataError;
use islandfs_core::engine::EngineError;
use islandfs_core::metrics::MetricsError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    MissingInput {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("run {run}: {source}")]
    Run {
        run: usize,
        #[source]
        source: EngineError,
    },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("solution {key} is missing scores")]
    Incomplete { key: u64 },
    #[error("sequential and parallel execution produced different results")]
    ModeMismatch,
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::MissingInput { .. } | CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}
