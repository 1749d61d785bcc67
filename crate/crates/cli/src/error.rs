use std::path::PathBuf;

use scramble_core::metrics::MetricsError;
use scramble_core::protocol::ProtocolError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("simulation failed: {0}")]
    Protocol(#[from] ProtocolError),
    #[error("aggregation failed: {0}")]
    Metrics(#[from] MetricsError),
}

impl CliError {
    /// 2 for anything the user can fix in the configuration or paths, 1 for
    /// failures inside the computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Protocol(_) | CliError::Metrics(_) => 1,
        }
    }
}
