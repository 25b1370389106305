use std::fmt;

use cadsim_core::ErrorKind;

/// Failures surfaced by the command line, each mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    Config { field: String, reason: String },
    Core(cadsim_core::Error),
    Data(String),
    Io(String),
}

impl CliError {
    pub fn config(field: &str, reason: impl Into<String>) -> Self {
        Self::Config {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    /// 2 configuration, 3 numeric domain, 4 data, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config { .. } => 2,
            Self::Core(e) => match e.kind() {
                ErrorKind::Config => 2,
                ErrorKind::Numeric => 3,
                ErrorKind::Data => 4,
            },
            Self::Data(_) => 4,
            Self::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config { field, reason } => write!(f, "config error: {field}: {reason}"),
            Self::Core(e) => match e.kind() {
                ErrorKind::Config => write!(f, "config error: {e}"),
                ErrorKind::Numeric => write!(f, "numeric error: {e}"),
                ErrorKind::Data => write!(f, "data error: {e}"),
            },
            Self::Data(msg) => write!(f, "data error: {msg}"),
            Self::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<cadsim_core::Error> for CliError {
    fn from(e: cadsim_core::Error) -> Self {
        Self::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Io(e.to_string())
    }
}
