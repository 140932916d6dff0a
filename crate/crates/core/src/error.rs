use thiserror::Error;

/// Failures raised by the numerical kernels and the CLI front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// An integral, constant or limit is not finite.
    #[error("divergence in {op}: {msg}")]
    Divergence { op: &'static str, msg: String },

    /// A GLS supremum grows without saturating toward an endpoint.
    #[error("infinite norm: {0}")]
    InfiniteNorm(String),

    /// The requested combination has no implementation (e.g. a weighted
    /// transform without a bound curve).
    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// Every problem found while validating a configuration.
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub(crate) fn divergence(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Divergence { op, msg: msg.into() }
    }

    /// True for the failure classes that mean "this quantity is not finite".
    pub fn is_divergence(&self) -> bool {
        matches!(self, Error::Divergence { .. } | Error::InfiniteNorm(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
