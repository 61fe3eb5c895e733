//! File formats: PGM images, CSV tables and plain-text signals.

pub mod pgm;
pub mod signal;
pub mod table;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use pgm::{read_pgm, write_pgm, PgmError};
pub use signal::{read_signal, write_signal};
pub use table::{fmt_real, read_table, write_table, Table};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Pgm {
        path: PathBuf,
        #[source]
        source: PgmError,
    },

    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
}

impl FormatError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        FormatError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn parse(path: &Path, message: impl Into<String>) -> Self {
        FormatError::Parse {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }
}
