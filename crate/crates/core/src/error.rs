use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the function's domain.
    #[error("{func}: domain error: {msg}")]
    Domain { func: &'static str, msg: String },

    /// A series hit its term cap before the tail fell below tolerance.
    #[error("{func}: no convergence after {terms} terms (estimated tail {tail:e})")]
    NonConvergence {
        func: &'static str,
        terms: usize,
        tail: f64,
    },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate histogram: {0}")]
    DegenerateHistogram(String),

    #[error("optimizer did not converge: {0}")]
    Optimizer(String),

    #[error("malformed trace: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            func,
            msg: msg.into(),
        }
    }

    /// True for failures caused by a series or integral not converging.
    pub fn is_convergence(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::Quadrature(_) | Error::Optimizer(_)
        )
    }
}
