use std::path::PathBuf;

/// Failures that abort a run before any report is written. All map to exit
/// status 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Read(PathBuf, #[source] std::io::Error),
    #[error("cannot write {0}: {1}")]
    Write(PathBuf, #[source] std::io::Error),
    #[error("malformed spec: {0}")]
    Spec(String),
    #[error("i/o failure in {source_label}: {message}")]
    Compute { source_label: String, message: String },
    #[error("cannot encode report: {0}")]
    Encode(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }
}
