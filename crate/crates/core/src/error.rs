use thiserror::Error;

/// Errors raised by hypercube operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: arity {n} exceeds the limit of {limit}")]
    Capacity {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("{what}: work estimate {needed} exceeds budget {budget}")]
    Budget {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
    #[error("table has length {len}, expected 2^{n} = {}", 1usize << n)]
    TableLength { n: usize, len: usize },
    #[error("entry {value} at index {index} is not +1 or -1")]
    NotBoolean { index: usize, value: f64 },
    #[error("entry at index {index} is not finite")]
    NotFinite { index: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("{0} is outside its domain")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
