use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input/output files. Exit code 1.
    #[error("{0}")]
    Io(String),
    /// Configuration or parameter problems. Exit code 2.
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

impl From<microrisk::Error> for CliError {
    fn from(e: microrisk::Error) -> Self {
        use microrisk::Error::*;
        match e {
            Validation(_) | UnresolvableValue { .. } | BruteForceLimit { .. } | ThreadPool(_) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Io(e.to_string()),
        }
    }
}

pub(crate) fn io_error(context: impl std::fmt::Display, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{context}: {e}"))
}

impl From<microrisk::ValidationError> for CliError {
    fn from(e: microrisk::ValidationError) -> Self {
        CliError::Validation(e.to_string())
    }
}
