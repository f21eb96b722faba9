use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroExtensionDegree,
    #[error("invalid field modulus: {0}")]
    InvalidModulus(String),
    #[error("a modulus was supplied for the prime field F_{0}")]
    UnexpectedModulus(u64),
    #[error("no built-in modulus for q = {0}; pass one explicitly")]
    MissingModulus(u64),
    #[error("field element index {index} out of range for q = {q}")]
    ElementOutOfRange { index: u64, q: u64 },
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("inversion of zero")]
    InverseOfZero,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("a non-constant polynomial is required")]
    ConstantPolynomial,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("exponent must be positive")]
    ZeroExponent,
    #[error("expected degree {expected}, got {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded { what: &'static str, value: String, cap: u64 },
    #[error("tight thresholds require q >= 3")]
    TightModeNeedsOddQ,
    #[error("polynomial is not a member of T4")]
    NotInT4,
    #[error("unknown {kind} '{name}' (available: {available})")]
    UnknownStrategy { kind: &'static str, name: String, available: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn cap(what: &'static str, value: impl ToString, cap: u64) -> Self {
        Error::CapExceeded { what, value: value.to_string(), cap }
    }

    /// Stable machine-readable tag for structured error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::CapExceeded { .. } => "cap_exceeded",
            _ => "domain",
        }
    }
}
