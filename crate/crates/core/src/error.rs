use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate}, error {error})")]
    Convergence { estimate: f64, error: f64, subdivisions: usize },

    #[error("no sign change on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("binomial weights overflow at index {0}")]
    Overflow(usize),

    #[error("self-check failed: {0}")]
    SelfCheck(String),

    #[error("sampler kind does not match inequality kind {0}")]
    SamplerMismatch(String),

    #[error("maximization failed: {0}")]
    Maximization(String),

    #[error("invalid polynomial file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical machinery, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. }
                | Error::Bracket { .. }
                | Error::Overflow(_)
                | Error::SelfCheck(_)
                | Error::Maximization(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
