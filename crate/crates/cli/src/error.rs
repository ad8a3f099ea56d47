use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("grid point {index} ({parameter} = {value}): {source}")]
    Engine {
        index: usize,
        parameter: String,
        value: f64,
        source: mmwave_core::Error,
    },

    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    /// Process exit status: 2 for configuration problems, 3 for engine and
    /// output failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Read { .. } => 2,
            CliError::Engine { .. } | CliError::Output(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
