use thiserror::Error;

/// Errors surfaced by the proof toolkit.
///
/// Contract violations (modulus mismatch, division by zero) are not part of
/// this enum; they panic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value out of range: {0}")]
    Range(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("modulus {q} too small: need q > {need}")]
    ModulusTooSmall { q: u64, need: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("instance exceeds guard: {0}")]
    GuardExceeded(String),
    #[error("decoding failed: {0}")]
    Decode(#[from] DecodeFailure),
    #[error("answer extraction failed: {0}")]
    Extraction(String),
}

/// Why the Gao decoder refused a received word.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeFailure {
    #[error("received {received} shares, need at least {needed}")]
    TooFewShares { received: usize, needed: usize },
    #[error("duplicate evaluation point {0}")]
    DuplicatePoint(u64),
    #[error("division left a nonzero remainder")]
    NonzeroRemainder,
    #[error("decoded degree {degree} exceeds bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },
    #[error("{errors} corrupted shares exceed the correction radius {radius}")]
    TooManyErrors { errors: usize, radius: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
