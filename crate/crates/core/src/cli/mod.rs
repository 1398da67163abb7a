//! Sweep evaluation, CSV output and configuration for the command-line tool.

mod config;
mod csv;
mod sweep;

use thiserror::Error;

use crate::hyperfine::HyperfineError;

pub use config::{load_config, parse_config, ConfigFile, CONFIG_ENV_VAR};
pub use csv::{emit_csv, format_number, parse_csv, write_csv_file, CSV_HEADER};
pub use sweep::{divergence_report, run_sweep, DivergenceReport, GridScale, Preset, SweepMode, SweepRow, SweepSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Hyperfine(#[from] HyperfineError),
    #[error("no rows to write")]
    EmptyRows,
    #[error("malformed CSV at line {line}: {reason}")]
    MalformedCsv { line: usize, reason: String },
    #[error("I/O failure: {0}")]
    IoFailure(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 1 for validation problems, 2 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::IoFailure(_) => 2,
            _ => 1,
        }
    }
}
