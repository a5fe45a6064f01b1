//! Seeded Monte-Carlo experiments over parameter grids.

mod config;
mod record;
mod runner;

pub use config::{AlgoChoice, Cell, ExperimentConfig, KPolicy, Model};
pub use record::{ExperimentRecord, CSV_HEADER};
pub use runner::{auto_algo, run_experiment, run_experiment_to, success_rate};

use thiserror::Error;

use crate::error::GraphError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("inconsistent record {run_id}: {message}")]
    Record { run_id: usize, message: String },
}
