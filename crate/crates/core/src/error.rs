use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Caller supplied something outside an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown instance `{0}`")]
    UnknownInstance(String),

    /// Enumeration grew past `Budget::element_cap`.
    #[error("element cap of {cap} exceeded while enumerating {what}")]
    BudgetExceeded { what: String, cap: usize },

    #[error("elements belong to different groups: {0} vs {1}")]
    GroupMismatch(String, String),

    /// An identity that must hold exactly failed. Always a bug.
    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),

    #[error("schema error: {0}")]
    Schema(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::InternalConsistency(msg.into())
    }

    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    /// Process exit status used by the CLI for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InternalConsistency(_) => 3,
            _ => 2,
        }
    }
}
