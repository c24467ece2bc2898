use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Part (b) quantities divide by `n - 1` and are undefined on the projective line.
    #[error("operation requires n >= 2 (got n = {0})")]
    UnsupportedDimension(u32),

    #[error("factor index {index} out of range 0..={max}")]
    FactorIndexOutOfRange { index: u32, max: u32 },

    #[error("operands live over different radicals: ({lhs_s}, {lhs_n}) vs ({rhs_s}, {rhs_n})")]
    MismatchedRadical {
        lhs_s: String,
        lhs_n: u32,
        rhs_s: String,
        rhs_n: u32,
    },

    #[error("{0} is not a prime >= 3")]
    NotPrime(u64),

    #[error("no nonzero kernel found up to degree {cap}")]
    CapExceeded { cap: u64 },

    #[error("sign undetermined at {bits} bits of precision")]
    Indeterminate { bits: u32 },

    #[error("duplicate point at index {0}")]
    DuplicatePoint(usize),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
