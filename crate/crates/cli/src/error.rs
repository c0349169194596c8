use std::fmt;

use udwf_core::Error;

/// Failures mapped onto the process exit codes.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Tolerance(String),
    Verification(Vec<u8>),
    Output(String),
}

impl CliError {
    pub fn field(name: &str, reason: String) -> Self {
        CliError::Input(format!("field `{name}`: {reason}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) | CliError::Output(_) => 2,
            CliError::Tolerance(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Tolerance(m) => f.write_str(m),
            CliError::Verification(ids) => write!(f, "verification failed for criteria {ids:?}"),
            CliError::Output(m) => write!(f, "cannot write output: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ToleranceNotMet { .. } | Error::IntegrationFailure { .. } => CliError::Tolerance(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}
