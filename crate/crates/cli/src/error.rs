use std::io;
use std::path::PathBuf;

/// Exit code for malformed input, bad flags, or unreadable/unwritable files.
pub const EXIT_BAD_INPUT: i32 = 2;
/// Exit code for numeric failures on otherwise valid input.
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}, line {line}: {msg}")]
    Row {
        path: PathBuf,
        line: u64,
        msg: String,
    },
    #[error(transparent)]
    Core(#[from] allometry_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_input_error() => EXIT_NUMERIC,
            _ => EXIT_BAD_INPUT,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
