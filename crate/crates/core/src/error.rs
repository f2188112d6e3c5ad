use thiserror::Error;

/// Errors raised anywhere in the construction pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid simple type {family}{rank}")]
    InvalidType { family: char, rank: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("structure constants violate the Jacobi identity on basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),

    #[error("variable universe mismatch: {left} vs {right} variables")]
    VariableMismatch { left: usize, right: usize },

    #[error("unbound variable {0}")]
    UnboundVariable(String),

    #[error("no slice complement found at height {height}")]
    SliceSelection { height: i64 },

    #[error("vector is not in the image of ad(epsilon)")]
    NotInImage,

    #[error("degree {degree} does not match the degree {expected} of slice index {index}")]
    DegreeMismatch {
        degree: u32,
        expected: u32,
        index: usize,
    },

    #[error("seed target does not fit the degree: {0}")]
    SeedMismatch(String),

    #[error("induction order defect: no value stored for {0}")]
    MissingDependency(String),

    #[error("checkpoint does not belong to this computation (hash {found}, expected {expected})")]
    ResumeMismatch { expected: String, found: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal defect: {0}")]
    Defect(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
