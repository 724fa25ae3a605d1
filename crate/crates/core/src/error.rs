use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid interface: |A|={actions}, |O|={observations} (both must be at least 2)")]
    InvalidInterface { actions: usize, observations: usize },

    #[error("enumeration cap exceeded: {cells} cells requested, cap is {cap}")]
    CapExceeded { cells: u128, cap: u64 },

    #[error("contract violation at history [{history}]: {reason}")]
    ContractViolation { history: String, reason: String },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical integrity check failed: {0}")]
    NumericalIntegrity(String),

    #[error("unsupported variant: {0}")]
    UnsupportedVariant(String),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("unknown zoo name `{0}`")]
    UnknownName(String),

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
