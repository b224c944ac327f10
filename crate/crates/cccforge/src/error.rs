use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input that does not describe a valid object (bad point, repeated
    /// point in a word, non-partition groups, ...).
    #[error("invalid input: {0}")]
    Invalid(String),
    /// Parameters outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A recipe that cannot be developed as written.
    #[error("recipe error: {0}")]
    Recipe(String),
    /// A construction produced something that failed re-verification.
    #[error("construction failed: {0}")]
    Construction(String),
    /// A required ingredient or data file is missing.
    #[error("data gated: {0}")]
    DataGated(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub(crate) fn write_file(path: &std::path::Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|source| Error::Io {
                path: dir.display().to_string(),
                source,
            })?;
        }
    }
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
