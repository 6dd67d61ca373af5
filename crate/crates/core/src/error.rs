use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at {line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("presentation failed validation: {0}")]
    Validation(String),

    #[error("bidegree mismatch: {0}")]
    Bidegree(String),

    #[error("degree mismatch: expected degree {expected}, found {found}")]
    Degree { expected: usize, found: usize },

    #[error("matrix is not Hermitian positive definite: {0}")]
    NotPositive(String),

    #[error("form is not closed: {0}")]
    NotClosed(String),

    #[error("form does not lie in the numerator of the {model} complex: {detail}")]
    NotInNumerator { model: String, detail: String },

    #[error("class is not primitive: {0}")]
    NotPrimitive(String),

    #[error("deformed coframe is degenerate at t = {0}")]
    DegenerateCoframe(String),

    #[error("deformed structure is not integrable: {0}")]
    NotIntegrable(String),

    #[error("no holomorphic volume form available: {0}")]
    MissingVolume(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("{0}")]
    Usage(String),
}
