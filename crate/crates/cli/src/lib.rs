//! Representation file I/O and run report plumbing for the `anosov` binary.

pub mod format;
pub mod report;

/// Command-level error carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    Core(anosov_core::Error),
    Io(String),
    Format(String),
    Usage(String),
}

impl From<anosov_core::Error> for CliError {
    fn from(e: anosov_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Format(m) | CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(anosov_core::Error::GuardExceeded { .. }) => 4,
            _ => 1,
        }
    }
}
