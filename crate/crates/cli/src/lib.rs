//! Configuration, experiment dispatch and report files for the `qthalf` binary.

pub mod config;
pub mod experiments;
pub mod report;

use thiserror::Error;

pub use config::{Kind, RunConfig};
pub use experiments::run_experiment;
pub use report::{emit_report, Metric, Report, Series};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Config(Vec<String>),
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: qthalf_core::Error,
    },
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core { .. } | CliError::Io { .. } => 3,
        }
    }
}

/// Attach experiment context to a library error.
pub(crate) trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, CliError>;
}

impl<T> Context<T> for qthalf_core::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, CliError> {
        self.map_err(|source| CliError::Core { context: what(), source })
    }
}
