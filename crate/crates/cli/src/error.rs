use std::fmt;
use std::process::ExitCode;

use spherical_slices::Error;

#[derive(Debug)]
pub enum CliError {
    /// Exit code 1.
    Invariant(String),
    /// Exit code 2.
    Config(String),
    /// Exit code 3.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Invariant(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invariant(m) => write!(f, "invariant failure: {m}"),
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Range(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o: {e}"))
    }
}
