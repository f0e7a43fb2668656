//! Batch front-end: JSON experiment configs in, CSV tables, optional SVG
//! plots and a JSON manifest out.
//!
//! Exit codes: 2 unreadable or malformed config, 3 invalid config, 4 state
//! invariant or check failure, 5 step-size guard violation, 6 I/O failure.

mod config;
mod csv;
mod manifest;
mod plot;
mod run;
mod verify;

use std::path::{Path, PathBuf};

pub use config::{
    parse_config, parse_config_str, Backend, BathConfig, DfsConfig, ExperimentConfig, ExperimentKind,
    ScheduleConfig, ScheduleKind, SweepConfig, SweepParamName, SystemConfig, TimeConfig, TopologySpec,
    DEFAULT_J, DEFAULT_K,
};
pub use csv::{format_number, population_csv, render_table, sweep_csv, write_population_csv, write_sweep_csv};
pub use manifest::{CheckRecord, RunManifest, MANIFEST_FILE};
pub use plot::line_plot_svg;
pub use run::{resolve_initial_state, run};
pub use verify::verify_suite;

/// Environment variable consulted when neither the command line nor the
/// config names an output directory.
pub const OUTPUT_DIR_ENV: &str = "QSIM_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "qsim-out";

#[derive(Debug, thiserror::Error)]
pub enum RunnerError {
    #[error("cannot parse config: {message}")]
    Parse { message: String },

    #[error("invalid config at `{path}`: {message}")]
    Validation { path: String, message: String },

    #[error(transparent)]
    Simulation(#[from] crate::Error),

    #[error("I/O failure on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("run checks failed: {0}")]
    ChecksFailed(String),
}

impl RunnerError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        RunnerError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            RunnerError::Parse { .. } => 2,
            RunnerError::Validation { .. } => 3,
            RunnerError::Simulation(e) => match e {
                crate::Error::InvariantViolation { .. } | crate::Error::NoConvergence { .. } => 4,
                crate::Error::StepSizeGuard { .. } => 5,
                _ => 3,
            },
            RunnerError::ChecksFailed(_) => 4,
            RunnerError::Io { .. } => 6,
        }
    }
}

/// Output directory: explicit override, then the config, then
/// `$QSIM_OUTPUT_DIR`, then `qsim-out`.
pub fn resolve_output_dir(cli: Option<&Path>, config: &ExperimentConfig) -> PathBuf {
    cli.map(Path::to_path_buf)
        .or_else(|| config.output_dir.clone())
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
}
