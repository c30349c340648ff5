use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// Input errors (bad parameters, malformed files) are distinguished from
/// [`Error::Invariant`], which signals that a computed object failed its own
/// re-verification and points at a bug rather than at the caller.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("valuation undefined at zero")]
    ValuationAtZero,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("expected an odd prime, got {0}")]
    NotOddPrime(String),
    #[error("argument must be nonzero: {0}")]
    Zero(&'static str),
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("singular curve: {0}")]
    Singular(String),
    #[error("model outside the minimal-model normalization: {0}")]
    NonIntegralInvariants(String),
    #[error("additive reduction at 2; outside scope")]
    AdditiveAtTwo,
    #[error("bad reduction at {0}")]
    BadReduction(u64),
    #[error("cannot normalize x so that Cx = 1 (mod 4): Cx = {0}")]
    Unnormalizable(String),
    #[error("invalid Frey instance: {0}")]
    InvalidInstance(String),
    #[error("solution outside shape constraints: {0}")]
    OutsideShape(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("pair outside enumeration: {0}")]
    PairOutsideEnumeration(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown format `{0}`")]
    UnknownFormat(String),
    #[error("cannot factor {0}")]
    Factorization(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("render failed: {0}")]
    Render(String),
}

pub type Result<T> = std::result::Result<T, Error>;
