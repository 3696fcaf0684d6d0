use thiserror::Error;

use crate::region::Cell;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// A strip or examined cell required by the operation is absent.
    #[error("not applicable: cell ({}, {}) is not in the region", .0.x, .0.y)]
    NotApplicable(Cell),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("step {index}: {source}")]
    Step {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn at_step(self, index: usize) -> Self {
        Error::Step {
            index,
            source: Box::new(self),
        }
    }
}
