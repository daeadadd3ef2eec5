use thiserror::Error;

/// Failure categories reported by the library and mapped to CLI exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("config: {0}")]
    Config(String),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("solver: {0}")]
    Solver(String),
    #[error("acceptance: {0}")]
    Acceptance(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn category(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::Geometry(_) => "geometry",
            Error::Solver(_) => "solver",
            Error::Acceptance(_) => "acceptance",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn geometry<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Geometry(msg.into()))
}
