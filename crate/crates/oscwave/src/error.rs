use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] oscwave_core::Error),
    #[error("kernel series for {what} needed more than {cap} terms")]
    Truncated { what: &'static str, cap: usize },
    #[error("({q}, {r}) is not an admissible Strichartz pair")]
    Inadmissible { q: f64, r: f64 },
    #[error("unknown estimate id `{0}`")]
    UnknownEstimate(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed {what}: {detail}")]
    Format { what: &'static str, detail: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 2 for invalid input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        use oscwave_core::Error as C;
        match self {
            Error::Core(
                C::Domain { .. }
                | C::SingularTime { .. }
                | C::Invalid { .. }
                | C::Resolution { .. },
            ) => 2,
            Error::Inadmissible { .. }
            | Error::UnknownEstimate(_)
            | Error::Config(_)
            | Error::Format { .. } => 2,
            Error::Json(e) if !e.is_io() => 2,
            _ => 1,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
