//! Thickness sweeps, scaling fits and result files for the cylindrical-shell
//! stability toolkit in `shellbuck-core`.
//!
//! A run is a [`commands::Command`] applied to a [`config::RunConfig`]; the
//! resulting [`output::RunOutput`] is written as `<command>.csv` plus a JSON
//! run record with a content hash of the inputs.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

pub use commands::{run, Command, DentOptions};
pub use config::RunConfig;
pub use output::{RunOutput, RunRecord};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(shellbuck_core::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// 1 for configuration problems, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            _ => 2,
        }
    }
}

/// Run a command and write its CSV and JSON record into the configured
/// output directory.
pub fn run_and_write(cmd: &Command, cfg: &RunConfig) -> Result<(RunOutput, PathBuf, PathBuf), CliError> {
    let started = output::unix_now();
    let out = run(cmd, cfg)?;
    let config = cfg.canonical();
    let hash = output::content_hash(&format!("{}{}", cmd.canonical(), cfg.input_text()));
    let record = RunRecord {
        command: cmd.name(),
        config: &config,
        input_hash: hash,
        started_unix: started,
        finished_unix: output::unix_now(),
        output: &out,
    };
    let (csv, json) = output::write_outputs(&cfg.out_dir, &record)?;
    Ok((out, csv, json))
}
