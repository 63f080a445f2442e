//! File formats, the parallel trial runner and the subcommands behind the
//! `cwc-gas` binary.

pub mod commands;
pub mod experiment;
pub mod formats;
pub mod runner;

use cwc_gas_core::engine::DEFAULT_MAX_Q1;

/// Environment variable overriding the landscape size guard.
pub const MAX_Q1_ENV: &str = "CWC_GAS_MAX_Q1";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("golden mismatch: {0}")]
    Golden(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Format(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Params(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Golden(_) => 4,
            CliError::Io(_) | CliError::Format(_) => 1,
        }
    }
}

impl From<cwc_gas_core::Error> for CliError {
    fn from(e: cwc_gas_core::Error) -> Self {
        use cwc_gas_core::Error as E;
        match e {
            E::Resource { .. } => CliError::Resource(format!("{e}; raise {MAX_Q1_ENV} or pick a smaller instance")),
            E::Overflow(_) => CliError::Resource(e.to_string()),
            _ => CliError::Params(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Format(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Landscape guard from the environment, falling back to the default.
pub fn max_q1_from_env() -> Result<u32> {
    match std::env::var(MAX_Q1_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Params(format!("{MAX_Q1_ENV} must be an integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_Q1),
    }
}
