use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("prime mismatch: {left} vs {right}")]
    PrimeMismatch { left: u64, right: u64 },

    #[error("{op}: operand is zero")]
    ZeroOperand { op: &'static str },

    #[error("division by zero")]
    DivisionByZero,

    #[error("insufficient precision for {op}: need {needed} digits, have {have}")]
    InsufficientPrecision {
        op: &'static str,
        needed: i64,
        have: i64,
    },

    #[error("series did not reach the target precision within {budget} terms")]
    NonConvergent { budget: usize },

    #[error("prime {p} is not supported by {op}")]
    UnsupportedPrime { p: u64, op: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("term-count guard tripped: more than {limit} terms")]
    TooManyTerms { limit: usize },

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("enumeration bound exceeded: size {size} > bound {bound}")]
    BoundExceeded { size: u64, bound: u64 },

    #[error("argument too close to a pole at {location}")]
    PoleProximity { location: String },
}

pub type Result<T> = std::result::Result<T, Error>;
