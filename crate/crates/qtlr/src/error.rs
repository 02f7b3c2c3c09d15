//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QtError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("mode {mode} out of range for order-{order} tensor")]
    ModeOutOfRange { mode: usize, order: usize },
    #[error("spatial dimensions must be equal powers of two, got {0}x{1}")]
    NotPowerOfTwo(usize, usize),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("frames have mixed dimensions: {0}")]
    MixedDimensions(String),
    #[error("unreadable file {path}: {reason}")]
    UnreadableFile { path: String, reason: String },
    #[error("input too small: {0}")]
    TooSmall(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QtError>;
