use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("invalid rational `{0}`")]
    InvalidRational(String),

    #[error("{what} budget of {limit} exceeded")]
    BudgetExceeded { what: &'static str, limit: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precision cap reached: {0}")]
    Indeterminate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            message: message.into(),
        }
    }
}
