use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("objective evaluated to {value} at {point:?}")]
    NonFiniteObjective { point: Vec<f64>, value: f64 },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),

    #[error("fit failure: {0}")]
    Fit(String),

    #[error("resource cap exceeded: {0}")]
    Resource(String),
}

impl Error {
    /// True for errors caused by bad caller input rather than numerical failure.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Argument(_) | Error::UnsupportedSize(_) | Error::Resource(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
