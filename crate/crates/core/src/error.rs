use thiserror::Error;

/// Everything that can go wrong in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: symbol '{symbol}' is not allowed in {kind} group {group}")]
    IllegalSymbol {
        line: usize,
        group: usize,
        symbol: String,
        kind: &'static str,
    },

    #[error("group {index} has size {size}, groups need at least 2 qubits")]
    GroupTooSmall { index: usize, size: usize },

    #[error("state has no terms")]
    EmptyState,

    #[error("null state: every term cancels")]
    NullState,

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("{0}")]
    Domain(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

/// Coarse error classes, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Domain,
    Resource,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Syntax { .. }
            | Error::IllegalSymbol { .. }
            | Error::GroupTooSmall { .. }
            | Error::EmptyState
            | Error::NullState => ErrorClass::Parse,
            Error::Contract(_) | Error::Domain(_) => ErrorClass::Domain,
            Error::Resource(_) => ErrorClass::Resource,
        }
    }

    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
