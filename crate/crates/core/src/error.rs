use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::Field;

/// A parse failure in the stream expression language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    /// Byte offset into the input where parsing stopped.
    pub offset: usize,
    /// Tokens that would have been accepted at `offset`.
    pub expected: Vec<&'static str>,
    /// What was actually found (`end of input` at EOF).
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: expected ", self.offset)?;
        for (i, tok) in self.expected.iter().enumerate() {
            if i > 0 {
                f.write_str(if i + 1 == self.expected.len() {
                    " or "
                } else {
                    ", "
                })?;
            }
            f.write_str(tok)?;
        }
        write!(f, ", found {}", self.found)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("inverse of zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("invalid field descriptor `{0}`")]
    InvalidField(String),
    #[error("invalid scalar literal `{0}`")]
    InvalidScalar(String),
    #[error("not invertible: the divisor has initial value 0")]
    NotInvertibleAtZero,
    #[error("stream has initial value 0 and no multiplicative inverse")]
    ZeroInitialValue,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ill-formed circuit: {0}")]
    IllFormed(String),
    #[error("initial vector must be the first standard basis vector (1, 0, ..., 0)")]
    UnsupportedInitialVector,
    #[error("state {index} out of range for an automaton with {states} states")]
    StateOutOfRange { index: usize, states: usize },
    #[error("prefix too short: need {needed} coefficients, got {got}")]
    InsufficientPrefix { needed: usize, got: usize },
    #[error("{0}")]
    Syntax(SyntaxError),
}

pub type Result<T> = core::result::Result<T, Error>;
