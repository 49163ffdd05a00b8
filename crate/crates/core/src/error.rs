use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group parameters r={r}, s={s}, n={n}: {reason}")]
    InvalidParams { r: u32, s: u32, n: u32, reason: &'static str },

    #[error("invalid group element: {0}")]
    InvalidElement(String),

    #[error("invalid reflection: {0}")]
    InvalidReflection(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("group parameter mismatch: {0} vs {1}")]
    ParamMismatch(String, String),

    #[error("vertex index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("resource limit exceeded: {what} needs {needed}, limit is {limit}")]
    ResourceLimit { what: &'static str, needed: u128, limit: u128 },

    #[error("missing count table entry: {0}")]
    MissingEntry(String),

    #[error("conflicting values for {key}: {left} vs {right}")]
    Conflict { key: String, left: String, right: String },

    #[error("expected an integer but got {0}")]
    NonIntegral(String),

    #[error("linear system is underdetermined: rank {rank} < {unknowns} unknowns")]
    Underdetermined { rank: usize, unknowns: usize },

    #[error("fit failed: {0}")]
    FitFailure(String),

    #[error("samples at different n demand different coefficients: {0}")]
    NInconsistent(String),

    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

impl Error {
    /// Errors that indicate a broken internal invariant rather than bad input.
    pub fn is_consistency_failure(&self) -> bool {
        matches!(
            self,
            Error::Conflict { .. } | Error::NonIntegral(_) | Error::FitFailure(_) | Error::NInconsistent(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
