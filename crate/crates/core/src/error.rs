use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument must be a positive integer, got {0}")]
    NonPositive(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sequence `{id}` is only defined for 1..={len}, requested n = {n}")]
    OutOfTableRange { id: String, n: u64, len: u64 },

    #[error("composition would produce {needed} pieces, above the cap of {cap}")]
    PieceCapExceeded { cap: usize, needed: usize },

    #[error("word expansion would produce {needed} symbols, above the cap of {cap}")]
    WordCapExceeded { cap: usize, needed: usize },

    #[error("infinite solution set: a linear piece on [{lo}, {hi}] lies on the line y = {line}")]
    InfiniteSolutionSet {
        lo: String,
        hi: String,
        line: String,
    },

    #[error("range of inner map is not contained in the domain of the outer map")]
    DomainMismatch,

    #[error("domain [{lo}, {hi}] is not symmetric about 0")]
    AsymmetricDomain { lo: String, hi: String },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
