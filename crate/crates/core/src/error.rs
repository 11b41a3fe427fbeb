use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("epsilon[{index}] = {value} is outside (0, 1/2)")]
    EpsilonOutOfRange { index: usize, value: String },

    #[error("lambda[{index}] is zero")]
    ZeroLambda { index: usize },

    /// An enclosure straddles a half-integer, so its nearest integer is not determined.
    #[error("enclosure too wide to determine the nearest integer")]
    AmbiguousEnclosure,

    /// A comparison between enclosures could not be decided at the current precision.
    #[error("undecided at current precision: {0}")]
    Undecided(&'static str),

    #[error("precision exhausted at {bits} bits: {reason}")]
    PrecisionExhausted { bits: u32, reason: &'static str },

    #[error("budget exceeded: {needed} points > budget {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors that a precision increase may resolve.
    pub fn is_precision_limited(&self) -> bool {
        matches!(self, Error::Undecided(_) | Error::AmbiguousEnclosure)
    }
}
