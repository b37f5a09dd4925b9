use std::path::PathBuf;

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Bad arguments, malformed input or a failed precondition.
pub const EXIT_VALIDATION: i32 = 1;
/// Results that contradict each other.
pub const EXIT_INCONSISTENT: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Core(#[from] iterstbc_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in {}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Inconsistent(_) | CliError::Core(iterstbc_core::Error::Inconsistent(_)) => EXIT_INCONSISTENT,
            _ => EXIT_VALIDATION,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

pub type CliResult<T> = Result<T, CliError>;
