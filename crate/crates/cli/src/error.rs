use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] betadom::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl CliError {
    /// 2 for bad parameters or input, 3 for numerical and I/O failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_parameter() => 2,
            CliError::Usage(_) => 2,
            CliError::Core(_) | CliError::Io(_) => 3,
        }
    }
}
