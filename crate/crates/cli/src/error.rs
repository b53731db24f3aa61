use arcspace::error::{IntegratorError, JetError, MatherError, PresentationError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("scene line {line}: {msg}")]
    Scene { line: usize, msg: String },
    #[error("unknown {0} `{1}`")]
    Unresolved(&'static str, String),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Mather(#[from] MatherError),
    #[error(transparent)]
    Integrator(#[from] IntegratorError),
}
