use std::fmt;

/// Failure categories, each with its own exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed or physically inadmissible configuration.
    Config(String),
    /// Any failure inside the numerical pipeline.
    Numeric(String),
    /// The requested level splitting is below the arithmetic resolution.
    Unresolved(String),
    /// A comparison finished but at least one cell is out of tolerance.
    Mismatch(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Unresolved(_) => 4,
            CliError::Mismatch(_) | CliError::Io(_) => 1,
        }
    }

    /// Classifies an error raised while executing a validated run.
    pub fn numeric(e: optrr::Error) -> Self {
        match e {
            optrr::Error::Unresolved(m) => CliError::Unresolved(m),
            other => CliError::Numeric(other.to_string()),
        }
    }

    /// Classifies an error raised while validating a configuration.
    pub fn config(e: optrr::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<optrr::Error> for CliError {
    fn from(e: optrr::Error) -> Self {
        if e.is_input_error() {
            CliError::Config(e.to_string())
        } else {
            CliError::numeric(e)
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::Unresolved(m) => write!(f, "unresolved: {m}"),
            CliError::Mismatch(m) => write!(f, "comparison failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
