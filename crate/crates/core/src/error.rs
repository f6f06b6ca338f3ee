//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group construction: {0}")]
    InvalidGroup(String),

    #[error("element id {id} out of range for group of order {order}")]
    ElementOutOfRange { id: usize, order: usize },

    #[error("measure {index}: {reason}")]
    InvalidMeasure { index: usize, reason: String },

    #[error("invalid interval union: {0}")]
    InvalidInterval(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("k = {0} is not prime")]
    NotPrime(usize),

    #[error("refinement depth cap {cap} exceeded; worst edge mass difference {worst} (bound {bound})")]
    DepthCapExceeded { cap: u32, worst: String, bound: String },

    #[error("labeling is not equivariant: label({g}.v{v}) != {g}.label(v{v})")]
    EquivarianceViolation { g: usize, v: usize },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("division search exhausted: {0}")]
    SearchExhausted(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
