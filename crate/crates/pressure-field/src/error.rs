use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] operator_core::Error),

    #[error(transparent)]
    Iso(#[from] riesz_iso::Error),

    #[error("invalid grid: {detail}")]
    InvalidGrid { detail: String },

    #[error("grid mismatch: field has {got}, expected {expected}")]
    GridMismatch { expected: String, got: String },

    #[error("{what} has {got} values, expected {expected}")]
    FieldLength {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("non-finite {what} value at index {index}")]
    NonFiniteField { what: &'static str, index: usize },

    #[error("manufactured case needs at least 2 cells along {axis}, grid has {got}")]
    DegenerateAxis { axis: &'static str, got: usize },

    #[error("{what} requires the dense solver; grid has {cells} cells, limit {limit}")]
    NeedsDense {
        what: &'static str,
        cells: usize,
        limit: usize,
    },

    #[error("conjugate gradient stalled after {iterations} iterations at relative residual {residual:.3e}")]
    CgDidNotConverge { iterations: usize, residual: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}: {detail}")]
    Parse { line: usize, detail: String },
}
