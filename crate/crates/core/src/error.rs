use num_bigint::BigUint;
use num_rational::BigRational;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{r} and {s} are not coprime")]
    NotCoprime { r: BigUint, s: BigUint },

    #[error("modulus {0} too small: signs +1 and -1 coincide")]
    ModulusTooSmall(BigUint),

    #[error("factoring budget exceeded on cofactor {0}")]
    FactoringBudgetExceeded(BigUint),

    #[error("lift precondition violated: {0}")]
    LiftPrecondition(String),

    #[error("log ratio is rational: {0}")]
    RationalRatio(BigRational),

    #[error("requested {requested} quotients but only {available} are certified")]
    BeyondCertified { requested: usize, available: usize },

    #[error("precision budget of {max_bits} bits exhausted while {what}")]
    PrecisionExhausted { what: &'static str, max_bits: u64 },

    #[error("not a solution: {0}")]
    NotASolution(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A proven bound was violated by an exact computation. Either the
    /// implementation is wrong or the cited result is.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("lemma {lemma} violated: {detail}")]
    LemmaViolation { lemma: String, detail: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
