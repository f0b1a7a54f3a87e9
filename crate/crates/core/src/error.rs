use thiserror::Error;

/// Errors surfaced by the clustering library.
///
/// Variants are grouped by [`ErrorKind`] so front ends (the CLI, the C ABI)
/// can map them onto stable exit or status codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlcError {
    #[error("coupling is undefined for a cluster of size {n}")]
    UndefinedCoupling { n: usize },

    #[error("constraint violated: c_s = {c} must be at least n_s = {n}")]
    ConstraintViolation { n: usize, c: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate series at row {row}: zero sample variance")]
    DegenerateSeries { row: usize },

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or mismatched input data.
    Input,
    /// A likelihood constraint or parameter bound was violated.
    Constraint,
    /// An engine invariant broke; indicates a bug.
    Internal,
}

impl AlcError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            AlcError::InvalidInput(_)
            | AlcError::DegenerateSeries { .. }
            | AlcError::Parse { .. }
            | AlcError::Io(_) => ErrorKind::Input,
            AlcError::UndefinedCoupling { .. }
            | AlcError::ConstraintViolation { .. }
            | AlcError::InvalidParameter(_) => ErrorKind::Constraint,
            AlcError::Internal(_) => ErrorKind::Internal,
        }
    }
}

impl From<std::io::Error> for AlcError {
    fn from(e: std::io::Error) -> Self {
        AlcError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, AlcError>;
