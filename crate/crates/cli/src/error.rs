use std::path::PathBuf;

/// Runner-level failures. Configuration problems and core math errors both
/// abort a run before any report exists; failed checks are not errors, they
/// are reported and reflected in the exit status instead.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] qclock::Error),

    #[error("cannot {action} {path}: {source}")]
    Io {
        action: &'static str,
        path: PathBuf,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
