use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate element: area {area:e} below threshold {threshold:e}")]
    DegenerateElement { area: f64, threshold: f64 },

    #[error("no material defined for region {0}")]
    MissingMaterial(usize),

    #[error("invalid material for region {region}: {reason}")]
    Material { region: usize, reason: String },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("eigenvalue iteration did not converge for index {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("eigenpair {index} residual {residual:e} exceeds tolerance {tol:e}")]
    Residual { index: usize, residual: f64, tol: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unsupported scenario: {0}")]
    UnsupportedScenario(String),
}
