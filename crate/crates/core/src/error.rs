use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// Checkers treat [`Error::Domain`] as a skipped trial; every other variant
/// aborts the operation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("incompatible shapes: {0}")]
    Shape(String),

    #[error("outside the domain: {0}")]
    Domain(String),

    #[error("unsupported operation: {0}")]
    Capability(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("invalid parameter `{name}`: {constraint}")]
    Parameter { name: String, constraint: String },

    #[error("unknown catalog id `{id}` (valid ids: {valid})")]
    Lookup { id: String, valid: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid certificate: {0}")]
    Certificate(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn param(name: &str, constraint: impl Into<String>) -> Self {
        Error::Parameter {
            name: name.to_string(),
            constraint: constraint.into(),
        }
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
