use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not an H-type structure: {0}")]
    NotHType(String),

    #[error("quadrature budget exhausted: partial value {value:.6e}, error estimate {error:.3e}")]
    QuadratureBudget { value: f64, error: f64 },

    #[error("truncation bound violated: {0}")]
    TruncationBound(String),

    #[error("consistency failure: {0}")]
    Consistency(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
