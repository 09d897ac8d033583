use thiserror::Error;

use crate::systemf::Ty;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unbound name `{0}`")]
    UnboundName(String),
}

impl ParseError {
    pub(crate) fn syntax(position: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("index {index} is out of range for the naming context")]
    IndexOutOfRange { index: usize },
    #[error("shifting index {index} by {amount} would make it negative")]
    NegativeIndex { index: usize, amount: isize },
    #[error("free index {index} occurs in the term")]
    OccursCheckFailed { index: usize },
    #[error("duplicate name `{0}` in naming context")]
    DuplicateName(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch at {location}: expected {expected}, found {found}")]
    Mismatch {
        location: String,
        expected: String,
        found: String,
    },
    #[error("unbound term variable {0}")]
    UnboundVariable(usize),
    #[error("unbound type variable {0}")]
    UnboundTypeVariable(usize),
    #[error("{0} is not available in this calculus")]
    Unsupported(&'static str),
}

impl TypeError {
    pub(crate) fn mismatch(location: &str, expected: impl ToString, found: &Ty) -> TypeError {
        TypeError::Mismatch {
            location: location.to_owned(),
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("ill-typed input: {0}")]
    IllTypedInput(#[from] TypeError),
}

/// Any error surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error("{0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Error {
        Error::Json(e.to_string())
    }
}
