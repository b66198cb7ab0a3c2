use thiserror::Error;

/// Errors raised anywhere in the algebra stack.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("{q} is not a power of the characteristic {p}")]
    NotPowerOfP { q: u64, p: u32 },
    #[error("too many variables: {0} (at most {max} supported)", max = crate::monomial::MAX_VARS)]
    TooManyVariables(usize),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("{kind} guard exceeded (limit {limit})")]
    GuardExceeded { kind: &'static str, limit: usize },
    #[error("the unit ideal has no dimension")]
    UnitIdeal,
    #[error("colon by the zero element")]
    ZeroDivisor,
    #[error("input is not homogeneous for the declared weights")]
    NonHomogeneous,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("submodule K is not contained in L")]
    NotContained,
    #[error("quotient is not annihilated by a power of the maximal ideal")]
    NotTorsion,
    #[error("length is not finite at the origin")]
    InfiniteLength,
    #[error("quotient ideal is not principal; theta needs a hypersurface")]
    NotHypersurface,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("exact division failed")]
    InexactDivision,
    #[error("not enough samples to determine a fit")]
    Underdetermined,
    #[error("inconsistent samples: {0}")]
    Inconsistent(String),
    #[error("oracle workspace too large ({0} coordinates)")]
    MemoryGuard(usize),
}

impl Error {
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. } | Error::MemoryGuard(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
