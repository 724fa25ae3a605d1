use std::io;

use thiserror::Error;

use crate::config::Command;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config {path}:{line}: {reason}")]
    ConfigSyntax {
        path: String,
        line: usize,
        reason: String,
    },

    #[error("unknown setting `{key}` for {command}")]
    UnknownKey { key: String, command: Command },

    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
    },

    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Core(#[from] gdi_core::Error),
}

impl CliError {
    /// Process exit status; each user-facing failure class has its own.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ConfigSyntax { .. } | CliError::UnknownKey { .. } | CliError::InvalidValue { .. } => 2,
            CliError::Core(gdi_core::Error::UnknownName(_)) => 3,
            CliError::Core(gdi_core::Error::InvalidInterval(_)) => 4,
            CliError::Core(gdi_core::Error::CapExceeded { .. }) => 5,
            CliError::Io { .. } => 6,
            CliError::Core(_) => 1,
        }
    }
}
