use thiserror::Error;

/// Failure of one analysis. The variant fixes the process exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    /// Bad flags, unreadable input, malformed polynomial or weights.
    #[error("{0}")]
    Validation(String),
    /// Input is not an isolated (semi)quasihomogeneous singularity.
    #[error("{0}")]
    OutOfScope(String),
    /// Two independent computations disagree.
    #[error("{0}")]
    Inconsistent(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::OutOfScope(_) => 2,
            CliError::Inconsistent(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::OutOfScope(_) => "out-of-scope",
            CliError::Inconsistent(_) => "inconsistent",
        }
    }
}
