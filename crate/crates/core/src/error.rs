use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one CLI exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("complex structure error: {0}")]
    ComplexStructure(String),
    #[error("not a subtorus: {0}")]
    NotASubtorus(String),
    #[error("not holomorphic: M does not commute with the complex structure")]
    NotHolomorphic,
    #[error("not surjective: det M = 0")]
    NotSurjective,
    #[error("invariance violation: image of basis vector {column} leaves the subspace")]
    InvarianceViolation { column: usize },
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("not found: {0}")]
    NotFound(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::ComplexStructure(_) => "complex-structure",
            Error::NotASubtorus(_) => "not-a-subtorus",
            Error::NotHolomorphic => "not-holomorphic",
            Error::NotSurjective => "not-surjective",
            Error::InvarianceViolation { .. } => "invariance-violation",
            Error::InvariantViolation(_) => "invariant-violation",
            Error::Resource(_) => "resource",
            Error::NotFound(_) => "not-found",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
