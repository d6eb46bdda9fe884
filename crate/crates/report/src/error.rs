use std::io;
use std::path::PathBuf;

use tanhseries_core::Error as CoreError;

pub type Result<T, E = ReportError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("invalid configuration: {0}")]
    Config(String),
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
        source: io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(String),
}

impl ReportError {
    pub fn config(msg: impl Into<String>) -> Self {
        ReportError::Config(msg.into())
    }

    /// Process exit status: 2 for bad input, 3 for numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            ReportError::Core { source, .. } => match source {
                CoreError::Parse { .. }
                | CoreError::DimensionMismatch { .. }
                | CoreError::InvalidArgument(_)
                | CoreError::UnsupportedWavenumber(_) => 2,
                _ => 3,
            },
            _ => 2,
        }
    }
}

impl From<csv::Error> for ReportError {
    fn from(e: csv::Error) -> Self {
        ReportError::Csv(e.to_string())
    }
}

/// Attaches a description of the failing step to core errors.
pub(crate) trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T>;
}

impl<T> Context<T> for std::result::Result<T, CoreError> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|source| ReportError::Core {
            context: what(),
            source,
        })
    }
}
