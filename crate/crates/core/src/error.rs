use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("zero polynomial has no tropicalization")]
    ZeroPolynomial,

    #[error("tropical hypersurface is empty")]
    EmptyHypersurface,

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("complex does not meet the window")]
    EmptyComplex,

    #[error("polynomial is degenerate in every coordinate (no fiber has two distinct exponents)")]
    DegenerateFibers,

    #[error("underflow: polycircle radius exp(-{alpha}/{rho}) is below 1e-300; use a larger rho or rescale the weights")]
    Underflow { alpha: f64, rho: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
