use pssmp_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("could not encode the report: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for usage and domain errors, 3 for runtime and budget failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                CoreError::Domain(_) | CoreError::Pole(_) | CoreError::Config(_) | CoreError::Unsupported(_) => 2,
                CoreError::Convergence { .. } | CoreError::IllConditioned { .. } | CoreError::Numeric(_) | CoreError::Budget(_) => 3,
            },
            CliError::Io(_) | CliError::Json(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
