use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("budget exceeded: {what} needs {needed} but the cap is {cap}")]
    Budget { what: &'static str, needed: u128, cap: u128 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("lemma violated: {0}")]
    Violation(String),

    #[error("search exhausted: {0}")]
    Exhausted(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
