use alloc::string::String;

/// Errors raised by the algebraic and counting routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("undeclared variable `{name}` at byte {position}")]
    UndeclaredVariable { name: String, position: usize },

    #[error("variable mismatch: {0}")]
    VariableMismatch(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),

    #[error("coefficient {0} has no reduction modulo {1}")]
    NoReduction(String, u32),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{what} = {value} is out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        range: String,
    },

    #[error("truncation level {level} is too low: {detail}")]
    TruncationInsufficient { level: u32, detail: String },

    #[error("work budget exceeded: needs more than {budget} {unit}; use sampled mode or raise the budget")]
    BudgetExceeded { budget: u64, unit: &'static str },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
