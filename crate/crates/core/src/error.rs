use thiserror::Error;

/// Errors surfaced by table construction, rewriting and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero scalar")]
    DivisionByZero,

    #[error("substitution pole: denominator vanishes at {0}")]
    SubstitutionPole(String),

    #[error("missing assignment for parameter {0}")]
    MissingAssignment(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("incomplete rule coverage: missing rule for ({0}, {1})")]
    IncompleteRuleCoverage(String, String),

    #[error("zero swap coefficient for ({0}, {1})")]
    ZeroSwap(String, String),

    #[error("non-termination guard exceeded after {steps} steps reducing {word}")]
    NonTermination { steps: usize, word: String },

    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown generator: {0}")]
    UnknownGenerator(String),

    #[error("generator index out of range: {0} (N = {1})")]
    IndexOutOfRange(String, u8),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
