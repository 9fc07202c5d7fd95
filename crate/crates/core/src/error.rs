use thiserror::Error;

/// Errors raised by constructors and closed-form evaluations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("overlap s = {0} outside [0, 1]")]
    OverlapOutOfRange(f64),

    #[error("omega = {0} outside [0, 1]")]
    OmegaOutOfRange(f64),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("coefficient r[0][0] = {0}, expected 1 (unit trace)")]
    NotUnitTrace(f64),

    #[error("matrix is not Hermitian (asymmetry {0:e} > 1e-9)")]
    NotHermitian(f64),

    #[error(
        "coefficient table has r[{alpha}][{beta}] = {value:e} outside the symmetric-parity pattern"
    )]
    UnsupportedStructure {
        alpha: usize,
        beta: usize,
        value: f64,
    },

    #[error("cubic discriminant {0:e} is negative (requires r33 <= 1)")]
    NegativeDiscriminant(f64),

    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("{what} requires at least {min} starts, got {got}")]
    TooFewStarts {
        what: &'static str,
        min: usize,
        got: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
