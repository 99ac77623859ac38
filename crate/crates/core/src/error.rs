use thiserror::Error;

/// Errors across the crate. Rejections of otherwise well-formed candidates
/// (wrong digit sum, wrong gcd) are not errors; see `search::Verdict`.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid digit character {0:?}")]
    InvalidDigit(char),

    #[error("digit string is empty")]
    EmptyDigits,

    #[error("digit string has a leading zero")]
    LeadingZero,

    #[error("digit {digit} at position {position} is not binary-like")]
    NonBinaryDigit { digit: u8, position: usize },

    #[error("modulus {0} is not coprime to 10")]
    NotCoprimeToTen(u64),

    #[error("modulus {0} is too small (need x >= 3)")]
    ModulusTooSmall(u64),

    #[error("class-sum vector has {actual} classes, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("operation requires multiplicative order 6; order of 10 mod {x} is {order}")]
    OrderNotSix { x: u64, order: usize },

    #[error("derived-form predicates are defined for x in {{7, 13}}, got {0}")]
    UnsupportedModulus(u64),

    #[error("{a} is not invertible modulo {modulus}")]
    NotInvertible { a: u64, modulus: u64 },

    #[error("parity lemma precondition violated: {x} + {y} != {p} + {q}")]
    ParityPrecondition { x: i64, y: i64, p: i64, q: i64 },

    #[error("class index {class} out of range for order {order}")]
    InvalidClass { class: usize, order: usize },

    #[error("composition space for total {total} into {parts} parts is too large to enumerate")]
    CompositionSpaceTooLarge { total: u64, parts: usize },

    #[error("digit cap {requested} exceeds the supported maximum of {supported}")]
    UnsupportedCap { requested: usize, supported: usize },

    #[error("cache file line {line}: {message}")]
    CacheFormat { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
