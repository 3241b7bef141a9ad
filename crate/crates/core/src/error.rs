use thiserror::Error;

/// Errors raised by ring construction, ideal arithmetic and the two
/// decomposition engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("quotient by the zero ideal is infinite")]
    InfiniteQuotient,
    #[error("all generators are zero")]
    ZeroIdeal,
    #[error("subset is not an ideal: {0}")]
    InvalidIdeal(String),
    #[error("subset is not closed under multiplication: {0}")]
    InvalidSubsemigroup(String),
    #[error("ring of order {order} exceeds the brute-force bound {limit}")]
    ResourceLimit { order: usize, limit: usize },
    #[error("factorisation failure: {0}")]
    FactorisationFailure(String),
    #[error("ideal is not principal: {0}")]
    NotPrincipal(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("semilattice law violated: {0}")]
    SemilatticeLawViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit status used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_)
            | Error::ZeroIdeal
            | Error::InvalidIdeal(_)
            | Error::InvalidSubsemigroup(_)
            | Error::Parse(_) => 2,
            Error::UnsupportedRing(_)
            | Error::InfiniteQuotient
            | Error::NotPrincipal(_)
            | Error::ResourceLimit { .. } => 3,
            Error::FactorisationFailure(_)
            | Error::InvariantViolation(_)
            | Error::SemilatticeLawViolation(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
