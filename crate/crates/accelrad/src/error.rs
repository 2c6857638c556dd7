use accelrad_core::Error as CoreError;

/// Failures surfaced by the runner, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read config: {0}")]
    Config(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerics(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Validation(_) | CliError::Output(_) => 2,
            CliError::Numerics(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ToleranceNotReached { .. }
            | CoreError::NonConvergence { .. }
            | CoreError::TruncationOverflow(_)
            | CoreError::PositivityViolation(_)
            | CoreError::Singular => CliError::Numerics(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
