use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value out of representable range: {0}")]
    OutOfRange(String),

    #[error("no hyperbolic configuration exists: {0}")]
    Infeasible(String),

    #[error("exactly two known elements are required, got {0}")]
    AmbiguousInput(usize),

    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),

    #[error("point is not on the hyperboloid sheet: {0}")]
    InvalidPoint(String),

    #[error("ideal vertex: {0}")]
    IdealVertex(String),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid total: {0}")]
    InvalidTotal(String),

    #[error("objective undefined at x = {x}: {reason}")]
    EvaluationFailure { x: f64, reason: String },

    #[error("grid oracle supports k <= 3, got k = {0}")]
    OracleTooLarge(usize),
}
