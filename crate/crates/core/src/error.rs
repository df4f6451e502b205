use thiserror::Error;

/// Errors raised by the arithmetic, counting and classification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),

    #[error("invalid discriminant {value}: {reason}")]
    Discriminant { value: i64, reason: &'static str },

    /// A precondition on the arguments failed (wrong residue class, out of range, ...).
    #[error("{0}")]
    Domain(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    /// The matrix satisfies the minimal polynomial only approximately, or
    /// the working precision is too small to decide the classification.
    #[error("precision failure: {0}")]
    Precision(String),

    /// An internal consistency check failed.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by malformed or out-of-domain input, as
    /// opposed to failed consistency checks.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_) | Error::Discriminant { .. } | Error::Domain(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
