use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomials live in different variable universes")]
    UniverseMismatch,
    #[error("operation is undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not of s-monomial type: {0}")]
    NotSMonomialType(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("size guard exceeded for {what}: limit {limit}, requested {requested}")]
    GuardExceeded {
        what: &'static str,
        limit: usize,
        requested: usize,
    },
    #[error("cap exceeded for {what}: cap {cap}, needed {needed}")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        needed: usize,
    },
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("invalid index tuple: {0}")]
    InvalidTuple(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a binary quasi-matrix: {0}")]
    NotBinary(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
