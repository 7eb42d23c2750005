use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("minimal polynomial is reducible: found a zero divisor in the quotient ring")]
    ReducibleModulus,

    #[error("invalid layer: {0}")]
    InvalidLayer(String),

    #[error("invalid field descriptor: {0}")]
    InvalidField(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("tower mismatch: {0}")]
    TowerMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("cannot decide: {0}")]
    Undecidable(String),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("scenario error in `{key}`: {message}")]
    Scenario { key: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
