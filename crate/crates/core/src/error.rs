use thiserror::Error;

/// Errors raised by the toolkit. Each variant maps onto one failure class so
/// front ends can translate it into an exit status.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Caller violated a precondition (bad index, wrong dimensions, wrong state).
    #[error("usage error: {0}")]
    Usage(String),

    /// Input file could not be parsed.
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    /// Data is well-formed but carries no usable signal for the requested method.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Parameters are inconsistent with the data (e.g. an oversized epsilon).
    #[error("configuration error: {0}")]
    Config(String),

    /// Values outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Matrix factorization failed.
    #[error("decomposition error: {0}")]
    Decomposition(String),

    /// Iterative routine failed to converge or a pivot limit was hit.
    #[error("numeric error: {message} (residual {residual:e})")]
    Numeric { message: String, residual: f64 },
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    pub(crate) fn parse(row: usize, column: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            row,
            column: column.into(),
            message: msg.into(),
        }
    }

    /// Short machine-readable name of the failure class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Usage(_) => "usage",
            Error::Parse { .. } => "parse",
            Error::Degenerate(_) => "degenerate",
            Error::Config(_) => "config",
            Error::Domain(_) => "domain",
            Error::Decomposition(_) => "decomposition",
            Error::Numeric { .. } => "numeric",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
