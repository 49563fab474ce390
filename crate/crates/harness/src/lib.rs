//! Command-line harness around `bmhd-core`: TOML run configs, experiment
//! runners and report files.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use cli::run_cli;
pub use commands::run_experiment;
pub use config::{load_config, resolve_config, Experiment, RunConfig};
pub use error::{HarnessError, Result};
pub use report::{emit_reports, RunResult, Series};
