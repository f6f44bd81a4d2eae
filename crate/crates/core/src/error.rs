use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("symbol {0} lies outside [0, 1]")]
    SymbolRange(String),

    #[error("blocks must contain at least one symbol")]
    EmptyBlock,

    #[error("index {index} outside block range [{lo}, {hi}]")]
    OutOfRange { index: i64, lo: i64, hi: i64 },

    #[error("invalid window [{i}, {j}]: {reason}")]
    BadWindow { i: i64, j: i64, reason: &'static str },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("parameter {name}={value} outside admissible range: {reason}")]
    Param {
        name: &'static str,
        value: String,
        reason: String,
    },

    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    ResourceCap { what: &'static str, needed: u128, cap: u128 },

    #[error("spacer solver gave up after {attempts} attempts; unsatisfied condition {condition}")]
    SolverExhausted { attempts: usize, condition: String },

    #[error("inconsistent construction: {0}")]
    Construction(String),

    #[error("finite system error: {0}")]
    System(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn param(name: &'static str, value: impl ToString, reason: impl Into<String>) -> Error {
    Error::Param {
        name,
        value: value.to_string(),
        reason: reason.into(),
    }
}
