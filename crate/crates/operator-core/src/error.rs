use thiserror::Error;

/// Errors for operator and subspace construction and application.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("operator shape must be positive, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },

    #[error("entry count {got} does not match {rows}x{cols}={expected}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },

    #[error("non-finite entry at index {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("basis vectors are not orthonormal: worst Gram deviation {deviation:.3e} exceeds {limit:.3e}")]
    NotOrthonormal { deviation: f64, limit: f64 },

    #[error("basis has {count} vectors but ambient dimension is only {ambient}")]
    TooManyVectors { count: usize, ambient: usize },
}
