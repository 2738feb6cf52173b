use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computed quantity left its physical range, e.g. a negative
    /// conditional variance or a non-physical covariance matrix.
    #[error("numerical domain error: {0}")]
    Numerical(String),

    #[error("at t_e = {t_e}: {source}")]
    AtTransmissivity { t_e: f64, source: Box<Error> },

    #[error("at quadrature node {index} (u = {u}): {source}")]
    AtNode { index: usize, u: f64, source: Box<Error> },

    #[error("at grid point {index} ({label}): {source}")]
    AtGridPoint {
        index: usize,
        label: String,
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("I/O error on {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
