use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: expected {expected} values, got {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error(
        "SOE tolerance {tol:e} unattainable within {max_modes} modes (best achieved {achieved:e})"
    )]
    SoeUnattainable {
        tol: f64,
        achieved: f64,
        max_modes: usize,
    },

    #[error("solution diverged at step {step} (t = {t}): non-finite values")]
    Divergence { step: usize, t: f64 },

    #[error("Krylov solve failed at step {step} (t = {t}): relative residual {residual:e} after {iterations} iterations")]
    KrylovNotConverged {
        step: usize,
        t: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("characteristic length undefined: {0}")]
    UndefinedLength(String),

    #[error("interface diagnostic unavailable: {0}")]
    Interface(String),

    #[error("fit failed: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
