//! Config-driven batch runner: validates an experiment, runs one
//! identification per seed in parallel and writes deterministic CSV output.

mod config;
mod output;
mod run;

use std::path::PathBuf;

pub use config::{
    ChainFile, CheckpointConfig, DemoConfig, EstimatorConfig, Experiment, ExperimentConfig, Grid, InputSpec, ListDecl,
    Mode, Plan, SeedSpec,
};
pub use output::{
    checkpoints_csv, plot_script, stats_text, summary_csv, write_atomic, write_results, CHECKPOINTS_FILE,
    DEMO_CSV_FILE, DEMO_TEXT_FILE, PLOT_FILE, STATS_FILE, SUMMARY_FILE,
};
pub use run::{run_experiment, summarize, Checkpoint, ExperimentResult, RunRecord, Summary};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid config at `{path}`: {message}")]
    ConfigInvalid { path: String, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no records to summarize")]
    EmptyInput,
    #[error("{0}")]
    Run(String),
}

impl HarnessError {
    /// Process exit code: 2 for config errors, 3 for I/O errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::ConfigInvalid { .. } => 2,
            HarnessError::Io { .. } => 3,
            HarnessError::EmptyInput | HarnessError::Run(_) => 1,
        }
    }

    /// The offending field path for config errors.
    pub fn field(&self) -> Option<&str> {
        match self {
            HarnessError::ConfigInvalid { path, .. } => Some(path),
            _ => None,
        }
    }
}
