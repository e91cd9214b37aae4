use serde::Serialize;
use thiserror::Error;
use velojet::JetError;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input: exit code 1.
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    /// The input is well formed but the operation is undefined on it: exit
    /// code 2.
    #[error(transparent)]
    Domain(#[from] JetError),
}

/// Machine-readable diagnostic written to stderr.
#[derive(Debug, Serialize)]
pub struct Diagnostic {
    pub error: String,
    pub detail: String,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 1,
            CliError::Domain(_) => 2,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse_error",
            CliError::Io(_) => "io_error",
            CliError::Domain(e) => e.code(),
        }
    }

    pub fn diagnostic(&self) -> Diagnostic {
        Diagnostic {
            error: self.code().to_string(),
            detail: self.to_string(),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
