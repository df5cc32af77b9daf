use scatter_core::ScatterError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("acceptance suite failed: {0}")]
    Acceptance(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl From<ScatterError> for CliError {
    fn from(e: ScatterError) -> Self {
        if e.is_config() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl CliError {
    /// 1 validation, 2 numerical, 3 acceptance, 4 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Acceptance(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}
