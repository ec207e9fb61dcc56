use thiserror::Error;

pub type Result<T> = std::result::Result<T, WitnessError>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("length {0} outside supported range 1..=64")]
    InvalidLength(usize),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("value {bits:#x} has bits beyond length {len}")]
    BitsOutOfRange { len: usize, bits: u64 },

    #[error("coordinate {coord} outside [1, {len}]")]
    CoordinateOutOfRange { len: usize, coord: usize },

    #[error("duplicate codeword {0}")]
    DuplicateWord(String),

    #[error("duplicate block {0}")]
    DuplicateBlock(String),

    #[error("codeword {0} is not in the code")]
    NotInCode(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("inconsistent bounds for f({n},{w}): lower {lower} exceeds upper {upper}")]
    InconsistentBounds {
        n: usize,
        w: usize,
        lower: String,
        upper: String,
    },

    #[error("solver produced an invalid certificate: {0}")]
    Certificate(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for WitnessError {
    fn from(e: std::io::Error) -> Self {
        WitnessError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for WitnessError {
    fn from(e: serde_json::Error) -> Self {
        WitnessError::Io(format!("json: {e}"))
    }
}
