use thiserror::Error;

/// Errors raised by the arithmetic, group and lifting layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("ring mismatch: Z/{left}Z vs Z/{right}Z")]
    RingMismatch { left: u64, right: u64 },

    #[error("matrix is singular over Z/{modulus}Z")]
    Singular { modulus: u64 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("group closure exceeded the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },

    #[error("coboundary system needs {needed} unknowns, cap is {cap}")]
    UnknownCapExceeded { needed: usize, cap: usize },

    #[error("lift search visited more than {cap} partial lifts")]
    SearchCapExceeded { cap: usize },

    #[error("borel and full-group paths disagree for {0}")]
    PathDisagreement(String),

    #[error("{0}")]
    Invariant(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
