use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },
    #[error("{origin}: {source}")]
    Json {
        origin: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{origin}: {message}")]
    Format { origin: String, message: String },
    #[error(
        "unsupported model bundle: schema `{schema}` version {version} (expected `{}` version {})",
        crate::bundle::MODEL_SCHEMA,
        crate::bundle::MODEL_VERSION
    )]
    Schema { schema: String, version: u64 },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] screenml_core::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
