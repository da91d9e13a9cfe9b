use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The hypergeometric series did not settle within the term budget.
    #[error("series did not converge after {terms} terms (|z| = {z_abs})")]
    Convergence { terms: usize, z_abs: f64 },

    /// A Runge-Kutta stage produced a non-finite value.
    #[error("non-finite value in Runge-Kutta stage {stage}")]
    BlowUp { stage: usize },

    /// The propagated field became zero or non-finite.
    #[error("propagation failed at step {step}, grid index {index}: {reason}")]
    Propagation {
        step: usize,
        index: usize,
        reason: String,
    },

    /// A point-level failure inside a grid scan or trajectory.
    #[error("at (x = {x}, t = {t}): {source}")]
    AtPoint {
        x: f64,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    /// A convergence fit was requested on unusable data.
    #[error("degenerate convergence fit: {0}")]
    DegenerateFit(String),

    /// Inconsistent grid or configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn at(self, x: f64, t: f64) -> Self {
        Error::AtPoint {
            x,
            t,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
