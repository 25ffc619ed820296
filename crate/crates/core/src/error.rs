//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid modulus p={p}, r={r}: {reason}")]
    InvalidModulus {
        p: u64,
        r: u32,
        reason: &'static str,
    },

    #[error("modulus mismatch: Z_{left} vs Z_{right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("value {value} is not reduced modulo {modulus}")]
    Unreduced { value: u64, modulus: u64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("subgroup level {level} outside [0, {r}]")]
    LevelOutOfRange { level: u32, r: u32 },

    #[error("zero element has no maximal subgroup level")]
    ZeroElement,

    #[error("invalid distribution: {0}")]
    InvalidPmf(String),

    #[error("unknown axis `{0}`")]
    UnknownAxis(String),

    #[error("enumeration guard exceeded: {what} needs {needed}, limit is {limit}")]
    Guard {
        what: &'static str,
        needed: f64,
        limit: f64,
    },

    #[error("index sequence is not a member of the index set")]
    NotInIndexSet,

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("cost constraint violated for user {user}: E[c] = {expected} > {cap}")]
    CostViolation {
        user: usize,
        expected: f64,
        cap: f64,
    },
}

impl Error {
    pub(crate) fn guard(what: &'static str, needed: f64, limit: f64) -> Self {
        Error::Guard {
            what,
            needed,
            limit,
        }
    }
}
