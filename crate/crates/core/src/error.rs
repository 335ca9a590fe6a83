use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested computation exceeds the configured work or memory budget.
    #[error("resource limit exceeded: {what} (needs {required}, budget {budget})")]
    Resource {
        what: String,
        required: u128,
        budget: u128,
    },
    /// Malformed input file or value.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(what: impl Into<String>, required: u128, budget: u128) -> Self {
        Error::Resource {
            what: what.into(),
            required,
            budget,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
