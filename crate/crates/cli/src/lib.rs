//! Scan driver behind the `vqse` binary: configuration, CSV and JSON
//! output, curve comparison and FCIDUMP bridging.

pub mod config;
pub mod diff;
pub mod fcidump;
pub mod scan;

/// Exit status 2 for configuration and usage errors, 1 otherwise.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Io(_) | CliError::Numerical(_) => 1,
        }
    }
}
