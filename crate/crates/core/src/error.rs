use thiserror::Error;

/// Errors produced while parsing, checking or constructing automata.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error("automaton is not weak: SCC {{{}}} mixes recurring and non-recurring states", .states.join(", "))]
    NotWeak { states: Vec<String> },
    #[error("formula check failed: {0}")]
    Check(String),
    #[error("state space of {bound} families exceeds the cap of {cap}")]
    CapExceeded { bound: String, cap: u64 },
    #[error("no initial states declared")]
    MissingInitial,
    #[error("backward determinism violated: {0}")]
    Determinism(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
