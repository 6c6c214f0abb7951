use std::fmt;

use sal_core::SalError;

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_INVARIANT: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;

/// Failure classes of a CLI run, each mapped to one exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable config, out-of-domain parameters.
    Config(String),
    /// A numerical check failed on otherwise valid input.
    Invariant(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invariant(_) => EXIT_INVARIANT,
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Invariant(m) => write!(f, "invariant violated: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Spec and parsing errors are the caller's fault; everything else is a
/// numerical breach.
impl From<SalError> for CliError {
    fn from(e: SalError) -> Self {
        match e {
            SalError::InvalidSpec(_) | SalError::UnknownProtocol(_) | SalError::DimensionMismatch { .. } => {
                CliError::Config(e.to_string())
            }
            other => CliError::Invariant(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
