use thiserror::Error;

use crate::quality::Violations;

/// Errors returned by the library. CLI maps every variant to the config-error exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(Violations),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("wrong case: {0}")]
    WrongCase(String),
    #[error("invalid delta: {0}")]
    InvalidDelta(String),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("insufficient SNR grid: {0}")]
    Grid(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("lattice construction failure: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
