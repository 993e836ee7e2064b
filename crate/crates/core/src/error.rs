use thiserror::Error;

use crate::topology::TopologyError;

/// Errors produced by the numeric, analytic and simulation layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DmtError {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported parameters: {0}")]
    UnsupportedParameter(String),

    #[error("topology error: {0}")]
    Topology(#[from] TopologyError),

    #[error("capacity error: {0}")]
    Capacity(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = DmtError> = std::result::Result<T, E>;
