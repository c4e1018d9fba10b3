use std::path::PathBuf;

use indexforge_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: CoreError,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 0 success, 1 usage or parse, 2 degenerate data, 3 numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core { source, .. } => match source {
                CoreError::Usage(_) | CoreError::Parse { .. } | CoreError::Config(_) => 1,
                CoreError::Degenerate(_) | CoreError::Domain(_) => 2,
                CoreError::Decomposition(_) | CoreError::Numeric { .. } => 3,
            },
            CliError::Io { .. } | CliError::Usage(_) => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Attaches a short description of what was being done to a core error.
pub trait Context<T> {
    fn context(self, what: impl Into<String>) -> CliResult<T>;
}

impl<T> Context<T> for indexforge_core::Result<T> {
    fn context(self, what: impl Into<String>) -> CliResult<T> {
        self.map_err(|source| CliError::Core {
            context: what.into(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(e: CoreError) -> i32 {
        CliError::Core {
            context: String::new(),
            source: e,
        }
        .exit_code()
    }

    #[test]
    fn exit_code_contract() {
        assert_eq!(code(CoreError::Usage("u".into())), 1);
        assert_eq!(
            code(CoreError::Parse {
                row: 2,
                column: "a".into(),
                message: "m".into()
            }),
            1
        );
        assert_eq!(code(CoreError::Config("c".into())), 1);
        assert_eq!(code(CoreError::Degenerate("d".into())), 2);
        assert_eq!(code(CoreError::Domain("d".into())), 2);
        assert_eq!(code(CoreError::Decomposition("d".into())), 3);
        assert_eq!(
            code(CoreError::Numeric {
                message: "n".into(),
                residual: 1.0
            }),
            3
        );
        assert_eq!(CliError::usage("x").exit_code(), 1);
    }
}
