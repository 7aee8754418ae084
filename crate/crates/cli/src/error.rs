use std::path::PathBuf;

/// Errors surfaced by the command line, each tied to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] heavymp_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Threshold(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for usage and argument errors, 2 for numeric failures (including a
    /// comparison over threshold), 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        use heavymp_core::Error as E;
        match self {
            Self::Usage(_) => 1,
            Self::Core(E::Argument { .. } | E::Capability { .. }) => 1,
            Self::Core(_) | Self::Threshold(_) => 2,
            Self::Io { .. } => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
