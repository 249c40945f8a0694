use num_bigint::BigUint;
use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure names the invariant it violates; `Error::name` returns a
/// stable machine-readable identifier for scripting against the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet size must be in 2..=256, got {0}")]
    InvalidAlphabet(usize),
    #[error("symbol {symbol} out of range for alphabet of size {q}")]
    SymbolOutOfRange { symbol: usize, q: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("rate must satisfy 0 <= R <= log2(q), got {rate}")]
    InvalidRate { rate: f64 },
    #[error("invalid type vector: {0}")]
    InvalidTypeVector(String),
    #[error("sequence length {got} does not match block length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("rank {rank} out of range for class of size {size}")]
    RankOutOfRange { rank: BigUint, size: BigUint },
    #[error("both codeword lengths equal {bits} bits while the raw branch is reachable")]
    LengthCollision { bits: usize },
    #[error("code size {size} exceeds {q}^{m}; no injection into the short branch exists")]
    InjectionImpossible { size: BigUint, q: usize, m: usize },
    #[error("compressed index {index} out of range for code of size {size}")]
    IndexOutOfRange { index: BigUint, size: BigUint },
    #[error("{q}^{t} payloads do not fit in {bits} bits")]
    CapacityExceeded { q: usize, t: usize, bits: usize },
    #[error("bit value {value} out of range for {q}^{t}")]
    ValueOutOfRange { value: BigUint, q: usize, t: usize },
    #[error("ciphertext length {got} matches neither branch length ({l1} or {l2})")]
    BadLength { got: usize, l1: usize, l2: usize },
    #[error("code and key compressor were built from different scheme parameters")]
    ParamsMismatch,
    #[error("instance too large for exact computation: {0}")]
    InstanceTooLarge(String),
    #[error("grid oracle supports q in {{2, 3}}, got {0}")]
    GridUnsupported(usize),
    #[error("{0} is defined for paper mode only")]
    PaperModeOnly(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable name of the violated invariant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidAlphabet(_) => "InvalidAlphabet",
            Error::SymbolOutOfRange { .. } => "SymbolOutOfRange",
            Error::InvalidDistribution(_) => "InvalidDistribution",
            Error::InvalidRate { .. } => "InvalidRate",
            Error::InvalidTypeVector(_) => "InvalidTypeVector",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::RankOutOfRange { .. } => "RankOutOfRange",
            Error::LengthCollision { .. } => "LengthCollision",
            Error::InjectionImpossible { .. } => "InjectionImpossible",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::CapacityExceeded { .. } => "CapacityExceeded",
            Error::ValueOutOfRange { .. } => "ValueOutOfRange",
            Error::BadLength { .. } => "BadLength",
            Error::ParamsMismatch => "ParamsMismatch",
            Error::InstanceTooLarge(_) => "InstanceTooLarge",
            Error::GridUnsupported(_) => "GridUnsupported",
            Error::PaperModeOnly(_) => "PaperModeOnly",
            Error::Parse(_) => "ParseError",
        }
    }
}
