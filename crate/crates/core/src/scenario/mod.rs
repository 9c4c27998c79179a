//! Scenario files, runs and reports.

mod config;
mod report;
mod run;

use thiserror::Error;

pub use config::{
    parse_scenario, parse_scenario_file, ModelConfig, OutputFormat, ScenarioConfig, ScenarioKind, StateConfig,
    WireComplex, WireMatrix, LAMBDA_PRESETS, STATE_PRESETS,
};
pub use report::{emit_report, OutcomeReport, ReportBody, ReportHeader, RunReport, Verification, VerificationOutcome};
pub use run::run_scenario;

/// Process exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status for unreadable, malformed or invalid scenarios.
pub const EXIT_INVALID: i32 = 1;
/// Exit status when `--verify` finds routes disagreeing beyond tolerance.
pub const EXIT_DISAGREEMENT: i32 = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    /// Malformed JSON or a field of the wrong shape.
    #[error("parse error: {message}")]
    Parse { line: usize, column: usize, message: String },

    /// Well-formed but inconsistent or out-of-range configuration.
    #[error("validation error in `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    /// The engine rejected the configuration while running it.
    #[error("{context}: {source}")]
    Engine {
        context: String,
        #[source]
        source: crate::Error,
    },
}

impl ScenarioError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INVALID
    }
}
