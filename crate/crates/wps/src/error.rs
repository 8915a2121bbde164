//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by validation, construction, and enumeration limits.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field of size {q} exceeds the enumeration limit {limit}")]
    FieldTooLarge { q: String, limit: u64 },

    #[error("dimension n = {0} exceeds the subset-enumeration cap n <= 24")]
    DimensionTooLarge(usize),

    /// `ord_d(q)` is undefined because `gcd(q, d) > 1`. Such a `d` never
    /// divides `q^r - 1`, so zeta construction skips it.
    #[error("multiplicative order of {q} modulo {d} is undefined (gcd > 1)")]
    OrderUndefined { q: String, d: u64 },

    #[error("the zero element has no multiplicative order")]
    ZeroElement,

    #[error("support mask is empty")]
    EmptySupport,

    /// A hypothesis of the special-case count `gcd(w_i, q-1) = 1` fails.
    #[error("gcd(w_{index}, q-1) = {gcd} > 1 violates the coprimality hypothesis")]
    HypothesisViolated { index: usize, gcd: u64 },

    #[error("gcd(w_0, gamma) = {0} > 1; the scaling comparison requires coprimality")]
    CoprimalityViolated(u64),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("polynomial is not weighted-homogeneous: monomial degrees {0} and {1} differ")]
    NotHomogeneous(u64, u64),

    #[error("polynomial is zero after reducing coefficients")]
    ZeroPolynomial,

    #[error("invalid input: {0}")]
    Invalid(String),

    /// An exact division that a counting identity guarantees left a nonzero
    /// remainder. Reported rather than truncated.
    #[error("exactness violation: {0}")]
    Inexact(String),
}

pub type Result<T> = std::result::Result<T, Error>;
