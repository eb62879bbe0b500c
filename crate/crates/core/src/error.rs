use thiserror::Error;

/// Errors raised by the numerical layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not positive definite (pivot {index} = {pivot:e} below tolerance {tol:e})")]
    NotPositiveDefinite { index: usize, pivot: f64, tol: f64 },

    #[error("matrix is not self-adjoint (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("algebra with beta = {0} supports scalar formulas only")]
    UnsupportedAlgebra(u8),

    #[error("invalid algebra dimension beta = {0}; expected 1, 2, 4 or 8")]
    InvalidBeta(u32),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("weight vector must be finite and weakly decreasing: {0:?}")]
    InvalidWeight(Vec<f64>),

    #[error("partition weight {weight} exceeds the configured maximum {max}")]
    WeightTooLarge { weight: usize, max: usize },

    #[error("partition has {parts} nonzero parts but only {m} variables are available")]
    TooManyParts { parts: usize, m: usize },

    #[error("values must be strictly decreasing and positive")]
    UnorderedInput,

    #[error("adaptive integration exceeded the node budget ({0} evaluations)")]
    IntegrationFailure(usize),

    #[error("linear transform is singular")]
    SingularTransform,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
