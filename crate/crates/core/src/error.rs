use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("row length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("exponent {value} out of range for m = {m}")]
    ExponentOutOfRange { value: u32, m: u32 },

    #[error("root order m must be positive")]
    ZeroRootOrder,

    #[error("malformed matrix: {0}")]
    Shape(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("size {size} exceeds the cap of {cap}")]
    SizeCap { size: u64, cap: u64 },

    #[error("malformed Latin square: {0}")]
    MalformedLatin(String),

    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("invalid tensor: {0}")]
    InvalidTensor(String),

    #[error("requires even {what}, got {value}")]
    RequiresEven { what: &'static str, value: u64 },

    #[error("input is not a Butson matrix: {0}")]
    NotButson(String),

    #[error("matrix must have all-ones first row and column")]
    NotDephased,

    #[error("cell ({row}, {col}) is not a C2 witness")]
    InvalidC2Cell { row: usize, col: usize },

    #[error("rows ({first}, {second}) do not satisfy C1")]
    InvalidC1Pair { first: usize, second: usize },

    #[error("matrix has no C1 row pair")]
    C1Absent,

    #[error("matrix has no C2 cell")]
    C2Absent,

    #[error("invalid LSESC set: {0}")]
    Lsesc(String),

    #[error("no complete LSESC set available for order {0}; supply one from a file")]
    LsescUnavailable(usize),

    #[error("invalid plan: {0}")]
    Plan(String),

    #[error("construction output failed exact verification")]
    OutputNotButson,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
