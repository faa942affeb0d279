//! Experiment runner for the `cutclass` optimizer: TOML configs, replicate
//! orchestration, trace files and median/quartile aggregates.

pub mod aggregate;
pub mod config;
pub mod experiment;
pub mod problem;

pub use aggregate::{AggregateReport, AggregateRow};
pub use config::{ExperimentConfig, MethodConfig, MethodKind, ProblemConfig};
pub use experiment::{run_experiment, run_replicate, worker_count, ExperimentOutcome};
pub use problem::Problem;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl From<cutclass::Error> for CliError {
    fn from(e: cutclass::Error) -> Self {
        match e {
            cutclass::Error::Config(m) => CliError::Config(m),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
