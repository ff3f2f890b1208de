//! Driver for the verification suites of `detpsi-core`: run configurations,
//! parallel execution, JSON reports and atomic output.
//!
//! A [`RunConfig`] fully determines the verdicts of a run. The worker count
//! only affects wall-clock time, because every sample and scenario draws its
//! randomness from its own seed and results are assembled in index order.

mod output;
mod run;

pub use output::{read_json, render_report, write_atomic, write_json_atomic, Report, VerdictSection, REPORT_SCHEMA_VERSION};
pub use run::{generate, run, RunConfig, ScenarioSource, Task};

use thiserror::Error;

/// Failures that prevent a run from producing a report.
#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] detpsi_core::error::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}
