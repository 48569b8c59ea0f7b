use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree mismatch: {0}")]
    Degree(String),

    #[error("interior product of a 0-form is undefined")]
    InteriorOfFunction,

    #[error("axis {axis} out of range for a {dim}-dimensional domain")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    #[error("1-form is not exact: residual {residual:.3e} exceeds threshold {threshold:.3e}")]
    NotExact { residual: f64, threshold: f64 },

    #[error("map has no inverse")]
    MissingInverse,

    #[error("point {0} lies outside the interval [0, 1]")]
    OutsideDomain(f64),

    #[error("map-space derivative needs a Euclidean target; lift the torus-valued map first")]
    PeriodicTarget,

    #[error("not an embedding: {0}")]
    NotEmbedding(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
