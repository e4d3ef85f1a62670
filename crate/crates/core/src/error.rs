use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A combinatorial object violates its structural invariants.
    #[error("structural error: {0}")]
    Structural(String),

    /// A geometric primitive degenerated (antipodal arc endpoints, etc).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A realized configuration contradicts the combinatorial data it was
    /// derived from; signals a false positive from the solver.
    #[error("inconsistent realization: {0}")]
    Inconsistent(String),

    /// Required enumeration data is missing.
    #[error("incomplete data: {0}")]
    Incomplete(String),

    /// File parse failure.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn incomplete(msg: impl Into<String>) -> Self {
        Error::Incomplete(msg.into())
    }
}
