use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("collision: {0}")]
    Collision(String),
    #[error("root not bracketed: f(a) = {fa:e}, f(b) = {fb:e}")]
    Bracket { fa: f64, fb: f64 },
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("step failure at tau = {tau}: {reason}")]
    StepFailure { tau: f64, reason: String },
    #[error("equilibrium not hyperbolic: min |Re lambda| = {0:e}")]
    Hyperbolicity(f64),
    #[error("quadrature self-check failed: relative change {rel_change:e} exceeds {threshold:e}")]
    QuadratureWarning { rel_change: f64, threshold: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn collision(msg: impl Into<String>) -> Error {
    Error::Collision(msg.into())
}
