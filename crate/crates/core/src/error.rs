use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("measurement operator is not Hermitian: {0}")]
    NotHermitian(String),

    #[error("measurement operators do not commute: {0} and {1}")]
    NonCommuting(String, String),

    #[error("orthogonalization failed: {0}")]
    Orthogonalization(String),

    #[error("translated subspaces overlap: translations {0} and {1} differ by a group element")]
    OverlappingTranslations(usize, usize),

    #[error("{qubits} qubits exceed the dense oracle cap of {cap}")]
    SizeCap { qubits: usize, cap: usize },

    #[error("unsupported measurement for this channel: {0}")]
    UnsupportedMeasurement(String),

    #[error("uncorrectable: {0}")]
    Uncorrectable(String),

    #[error("inconsistent decoding transcript: {0}")]
    Inconsistent(String),

    #[error("gate cost {cost} exceeds the bound {bound} ({which})")]
    CostBound { cost: u64, bound: u64, which: &'static str },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
