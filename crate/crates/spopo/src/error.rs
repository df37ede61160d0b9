use spopo_core::Error as CoreError;
use thiserror::Error;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("above threshold: {0}")]
    AboveThreshold(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::AboveThreshold(_) => 3,
            CliError::Solver(_) => 4,
            CliError::VerificationFailed(_) => 5,
            CliError::Io(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        let msg = err.to_string();
        match err {
            CoreError::AboveThreshold { .. } => CliError::AboveThreshold(msg),
            CoreError::NoConvergence { .. } | CoreError::ZeroCoupling | CoreError::Unstable(_) => {
                CliError::Solver(msg)
            }
            CoreError::InvalidParameter { .. }
            | CoreError::WindowMismatch { .. }
            | CoreError::NoPumpOverlap { .. } => CliError::Config(msg),
        }
    }
}
