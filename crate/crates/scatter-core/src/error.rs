use thiserror::Error;

/// Errors raised by the numerical pipeline.
///
/// [`ScatterError::Config`] and [`ScatterError::Length`] flag invalid input;
/// every other variant signals a numerical failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatterError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("non-finite sample in {0}")]
    NonFinite(&'static str),
    #[error("picard iteration did not converge after {iterations} iterations (last increment {last_increment:e})")]
    NoConvergence { iterations: usize, last_increment: f64 },
    #[error("jost function too small: |w| = {0:e}")]
    SingularJost(f64),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("accuracy check failed for {what}: {value:e} exceeds {limit:e}")]
    Accuracy { what: &'static str, value: f64, limit: f64 },
    #[error("step size underflow")]
    StepUnderflow,
    #[error("root search failed: {0}")]
    NoRoot(String),
}

impl ScatterError {
    /// True for errors caused by invalid input rather than numerical breakdown.
    pub fn is_config(&self) -> bool {
        matches!(self, ScatterError::Config(_) | ScatterError::Length { .. } | ScatterError::NonFinite(_))
    }
}

pub type Result<T> = std::result::Result<T, ScatterError>;
