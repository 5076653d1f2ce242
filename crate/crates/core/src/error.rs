use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("grid side length must be at least {min}, got {got}")]
    InvalidSize { got: usize, min: usize },
    #[error("colour count must be at least 1")]
    NoColors,
    #[error("colour {color} out of range for q = {q}")]
    ColorOutOfRange { color: u32, q: u32 },
    #[error("rotation index {0} outside 0..=3")]
    InvalidRotation(u8),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid piece bag: {0}")]
    InvalidBag(String),
    #[error("invalid assembly: {0}")]
    InvalidAssembly(String),
    #[error("assembly does not place the pieces of this bag: {0}")]
    LabelMismatch(String),
    #[error("certificate does not match this puzzle: {0}")]
    StaleCertificate(String),
    #[error("invalid polyomino: {0}")]
    InvalidPolyomino(String),
    #[error("enumeration size {0} exceeds the limit of 10")]
    EnumerationTooLarge(usize),
    #[error("epsilon must lie strictly between 0 and 1/4, got {0}")]
    EpsilonOutOfRange(String),
    #[error("invalid patch parameters: {0}")]
    InvalidPatch(String),
    #[error("ordering violates the independent-edge hypothesis at position {position}")]
    OrderingViolation { position: usize },
    #[error("edge {edge} has both half-edge colours already known")]
    BothHalvesKnown { edge: usize },
    #[error("patch kind {0} does not support this operation")]
    WrongPatchKind(&'static str),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
