use thiserror::Error;

/// One coordinate of the final per-column solve together with every
/// value in `0..m'` that satisfies it.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Candidates {
    /// Row of the file (0-based).
    pub row: usize,
    /// Column of the file (0-based).
    pub col: usize,
    pub values: Vec<u64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {m} has a prime factor {p} with exponent 1; every exponent must be at least 2")]
    NotComposite { m: u64, p: u64 },
    #[error("gcd({m}, {n}) = {gcd}, but the code length must be coprime to the modulus")]
    GcdViolation { m: u64, n: usize, gcd: u64 },
    #[error("invalid modulus {0}: must satisfy 2 <= m < 2^32")]
    InvalidModulus(u64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("vector is not a codeword of the code")]
    NotInCode,
    #[error("the non-free part of the code is trivial")]
    EmptyNonFreePart,
    #[error("generating-set extraction produced an inconsistent chain: {0}")]
    ChainViolation(String),
    #[error("polynomial does not divide x^n - 1 modulo p")]
    NotADivisor,
    #[error("sampler exhausted after {attempts} attempts: {what}")]
    SamplerExhausted { what: String, attempts: usize },
    #[error("file index {index} is outside 1..={t}")]
    InvalidIndex { index: usize, t: usize },
    #[error("recovery is ambiguous at {} coordinate(s)", .0.len())]
    AmbiguousSolution(Vec<Candidates>),
    #[error("no solution for file coordinate ({row}, {col}); the response is inconsistent")]
    NoSolution { row: usize, col: usize },
    #[error("z = [u] H_IN^T is zero; the entry lies in C_IN")]
    ZeroZ,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("golden mismatch: {0}")]
    GoldenMismatch(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
