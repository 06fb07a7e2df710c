use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation (non-finite
    /// samples, an exponent below one, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Spectral parameter too close to a pole, or a linear system that
    /// turned out singular.
    #[error("singular: {0}")]
    Singular(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// Initial data violating a compatibility condition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("blow-up at step {step}: non-finite state")]
    BlowUp { step: usize },

    #[error("eigensolver did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
}

impl Error {
    /// True for failures of the numerics themselves rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular(_) | Error::BlowUp { .. } | Error::NonConvergence { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
