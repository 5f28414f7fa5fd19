//! Batch front end: config parsing, experiment runs and plot-ready tables.

pub mod commands;
pub mod config;
pub mod io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unparseable or invalid input; exit code 1.
    #[error("{0}")]
    Config(String),
    /// Failure while computing; exit code 2.
    #[error("{0}")]
    Runtime(String),
    /// A fitted slope disagrees with the expected one; exit code 3.
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::Mismatch(_) => 3,
        }
    }
}

impl From<geohull_core::GeoError> for CliError {
    fn from(e: geohull_core::GeoError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub use commands::{run, Cli};
