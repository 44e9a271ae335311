use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A table could not be built at the requested size.
    #[error("size error: {0}")]
    Size(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A query exceeds the range covered by a precomputed table.
    #[error("range error: {0}")]
    Range(String),

    /// An iterative solver failed to reach its tolerance.
    #[error("solver error: {0}")]
    Solver(String),

    /// A high-precision evaluation could not decide a comparison.
    #[error("precision error: {0}")]
    Precision(String),

    /// Text input did not match the expected grammar.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("report format error on {path}: {message}")]
    Format { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
