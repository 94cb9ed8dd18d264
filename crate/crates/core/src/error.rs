use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("component {0} is a tree and has no 2-core")]
    EmptyCore(usize),
    #[error("invalid mu {mu}: Galton-Watson tree exceeded {limit} vertices")]
    InvalidMu { mu: f64, limit: usize },
    #[error("kernel is empty: no vertex drew degree >= 3")]
    KernelEmpty,
    #[error(
        "retained edges do not connect the component ({reached} of {expected} vertices reached)"
    )]
    NotConnected { reached: usize, expected: usize },
    #[error("instance too large for exhaustive search: {vertices} vertices, {edges} edges")]
    TooLarge { vertices: usize, edges: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
