use kronecker_core::Error;
use thiserror::Error as ThisError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_EXHAUSTED: u8 = 3;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{0}")]
    Core(#[from] Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(
                Error::PrecisionExhausted { .. }
                | Error::BudgetExceeded { .. }
                | Error::Undecided(_)
                | Error::AmbiguousEnclosure,
            ) => EXIT_EXHAUSTED,
            _ => EXIT_INVALID,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let exhausted = CliError::Core(Error::PrecisionExhausted { bits: 8, reason: "x" });
        assert_eq!(exhausted.exit_code(), EXIT_EXHAUSTED);
        let budget = CliError::Core(Error::BudgetExceeded {
            needed: "10".into(),
            budget: 1,
        });
        assert_eq!(budget.exit_code(), EXIT_EXHAUSTED);
        assert_eq!(CliError::Core(Error::ZeroLambda { index: 0 }).exit_code(), EXIT_INVALID);
        assert_eq!(invalid("bad").exit_code(), EXIT_INVALID);
    }
}
