use thiserror::Error;

use crate::units::ValidationReport;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sample count {found} does not match grid node count {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("wave vector must be non-zero")]
    ZeroWaveVector,

    #[error("wave vector {k} lies on the wrong side for a packet incident with K0 = {k0}")]
    WrongSide { k: f64, k0: f64 },

    #[error("domain too small: {leakage:e} of the probability lies outside the grid")]
    DomainTooSmall { leakage: f64 },

    #[error("scattering is not complete at tau = {tau}")]
    ScatteringIncomplete { tau: f64 },

    #[error("negative time tau = {0}")]
    NegativeTime(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("scenario validation failed:\n{0}")]
    Validation(ValidationReport),
}

pub type Result<T> = std::result::Result<T, Error>;
