use std::path::PathBuf;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VALIDATION: i32 = 1;
    pub const BUDGET: i32 = 2;
    pub const PROPERTY: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] sparsehard::Error),

    #[error("{0}")]
    Validation(String),

    #[error("estimated memory of {required_mb} MiB exceeds SPARSEHARD_CAP_MB = {cap_mb}")]
    Memory { required_mb: u64, cap_mb: u64 },

    /// Checks ran to completion and at least one failed.
    #[error("{0}")]
    Property(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(sparsehard::Error::Budget { .. }) | CliError::Memory { .. } => exit::BUDGET,
            CliError::Property(_) => exit::PROPERTY,
            _ => exit::VALIDATION,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}
