use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: entry ({row}, {col}) differs from the conjugate of ({col}, {row}) by {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("empty span: every vector of the family is zero")]
    EmptySpan,

    #[error("vector {0} is zero; zero vectors are reported under null_indices")]
    ZeroVector(usize),

    #[error("exact enumeration needs N <= {limit} but the family has N = {count}; use heuristic mode")]
    ExactLimit { count: usize, limit: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invariant failure: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FrameError>;

impl From<serde_json::Error> for FrameError {
    fn from(err: serde_json::Error) -> Self {
        FrameError::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}
