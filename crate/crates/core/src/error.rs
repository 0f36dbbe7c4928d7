use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("value {0} is not an element of the value group")]
    NotInGroup(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported segment form combination: {0}")]
    UnsupportedForm(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("Newton polygon has more than one slope; factor the polynomial first")]
    MixedSlopes,
    #[error("generator is not regular (residual polynomial is a power of a non-linear factor): {0}")]
    NotRegular(String),
    #[error("extension is not pure: e = {e}, f = {f}")]
    NotPure { e: u32, f: u32 },
    #[error("no scalar of matching value in the base field (ramified value {0})")]
    Ramified(String),
    #[error("set of polynomials is not complete for {0}")]
    IncompleteSet(String),
    #[error("no stabilization witnessed within the horizon")]
    NoStabilizationWitnessed,
    #[error("operation needs a concrete extension, got a synthetic spec")]
    NotConcrete,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("division by zero")]
    DivisionByZero,
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
