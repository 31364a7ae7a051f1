use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    /// The normal phase is not a stable ground state; carries the offending quasi-momentum.
    #[error("normal phase unstable at q = {q:.6} (epsilon = {epsilon:.3e})")]
    Unstable { q: f64, epsilon: f64 },

    #[error("no branch switch inside bracket [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("minimization did not converge at L = {l:.3e} (residual {residual:.3e})")]
    NotConverged { l: f64, residual: f64 },
}

pub(crate) fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be finite, got {v}")))
    }
}
