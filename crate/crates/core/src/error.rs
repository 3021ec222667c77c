use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolarError {
    #[error("blocklength {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),
    #[error("information count {k} out of range for blocklength {n}")]
    InfoCountOutOfRange { k: usize, n: usize },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("frozen position {0} carries a nonzero bit")]
    NonzeroFrozen(usize),
    #[error("value at index {0} is not a bit")]
    NotABit(usize),
    #[error("LLR at index {0} is not finite")]
    NonFiniteLlr(usize),
    #[error("unknown construction method `{0}`")]
    UnknownConstruction(String),
    #[error("invalid design parameter {0} for construction `{1}`")]
    InvalidDesignParam(f64, String),
    #[error("unknown node or merger tag `{0}`")]
    UnknownTag(String),
    #[error("unknown merger set `{0}`")]
    UnknownMergerSet(String),
    #[error("node kind {kind} cannot decode a span of {len} with depth {t}")]
    InvalidNode { kind: String, len: usize, t: u32 },
    #[error("schedule does not match code: {0}")]
    ScheduleMismatch(String),
    #[error("cost model does not price `{0}`")]
    Unpriced(String),
    #[error("nonpositive linear SNR {0}")]
    NonPositiveSnr(f64),
    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, PolarError>;
