use std::path::PathBuf;
use std::time::Duration;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration space: {0}")]
    InvalidSpace(String),
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("empty sample")]
    EmptySample,
    #[error("budget below population size (budget {budget}, population {population})")]
    BudgetBelowPopulation { budget: usize, population: usize },
    #[error("measurement budget exhausted")]
    BudgetExhausted,
    #[error("measuring configuration [{config}] failed: {source}")]
    Measurement {
        config: String,
        #[source]
        source: MeasureError,
    },
    #[error("{}:{line}: {message}", path.display())]
    Load {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("no cases found in {}", .0.display())]
    NoCases(PathBuf),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}

/// Failure of a single measurement of a configurable system.
#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("unmeasured configuration")]
    Unmeasured,
    #[error("measurement produced non-finite values")]
    NonFinite,
    #[error("process exited with {status}; stderr: {stderr}")]
    ExitStatus { status: String, stderr: String },
    #[error("timed out after {0:?}")]
    Timeout(Duration),
    #[error("unparsable output {output:?}: {reason}")]
    BadOutput { output: String, reason: String },
    #[error("process i/o: {0}")]
    Io(#[from] std::io::Error),
}
