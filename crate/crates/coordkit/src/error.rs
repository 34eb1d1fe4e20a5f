//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed instance data: dimension mismatch, unknown axis,
    /// non-normalized table, negative entry.
    #[error("instance format error: {0}")]
    InstanceFormat(String),

    /// Invalid run configuration (bad flag value, codebook cap exceeded).
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Scalar argument outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A rate or feasibility inequality is violated; named explicitly.
    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    /// Internal numeric failure (non-finite value, failed iteration).
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
