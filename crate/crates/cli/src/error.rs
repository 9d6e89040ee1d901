use std::path::PathBuf;

use thiserror::Error;

/// Process exit code for bad input: unparsable files, invalid flags.
pub const EXIT_INPUT: i32 = 2;
/// Process exit code for data that parses but lacks required settings.
pub const EXIT_INCOMPLETE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Core {
        context: String,
        source: qlur::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core {
                source: qlur::Error::MissingSetting(_) | qlur::Error::EmptyGroup(_),
                ..
            } => EXIT_INCOMPLETE,
            _ => EXIT_INPUT,
        }
    }

    pub(crate) fn core(context: impl Into<String>) -> impl FnOnce(qlur::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Core { context, source }
    }
}
