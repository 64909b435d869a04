use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("dimension error: need at least 2 entries, got {0}")]
    Dimension(usize),

    #[error("domain error: entry {value} at position {index} is not a positive integer")]
    NonPositiveEntry { index: usize, value: i64 },

    #[error("domain error: gcd of the entries is {gcd}, so no Frobenius number exists")]
    NotPrimitive { gcd: u64 },

    #[error("domain error: gcd({a}, {b}) = {gcd}, expected coprime arguments")]
    NotCoprime { a: i64, b: i64, gcd: u64 },

    #[error("domain error: {value} has no inverse modulo {modulus}")]
    NotInvertible { value: i64, modulus: u64 },

    #[error("bound {kind} not applicable: {reason}")]
    NotApplicable { kind: String, reason: String },

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("resource limit: {what} exceeds {limit}")]
    ResourceExhausted { what: &'static str, limit: u64 },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("roots-of-unity sum has imaginary part {imag:e}, expected a real value")]
    NonReal { imag: f64 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("sink write failed after {written} records (output is partial): {source}")]
    Sink {
        written: u64,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Io(#[from] io::Error),
}
