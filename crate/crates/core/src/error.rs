//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of model setup, integration, special functions, references,
/// and fits.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive integration failed (step underflow, step budget exhausted, or
    /// a non-finite state).
    #[error("integration failed for mode q={q}: {message}")]
    Integration {
        /// Momentum of the mode being integrated, or NaN when not tied to one.
        q: f64,
        /// What went wrong.
        message: String,
    },

    /// A special-function evaluation cannot reach the required accuracy
    /// (catastrophic cancellation, overflow of intermediate scales, or an
    /// argument outside every usable representation).
    #[error("accuracy loss: {0}")]
    AccuracyLoss(String),

    /// A linear match or solve is too ill-conditioned to trust.
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    /// A root or intersection being searched for does not exist in the
    /// searched interval.
    #[error("no intersection: {0}")]
    NoIntersection(String),

    /// A requested quantity is not defined for the given protocol (for
    /// example, ramp-era amplitudes of a sudden quench).
    #[error("degenerate protocol: {0}")]
    Degenerate(String),

    /// A fit has too few points, inadmissible values, or failed to converge.
    #[error("fit failed: {0}")]
    Fit(String),

    /// A resource limit (matrix size, iteration budget) was exceeded.
    #[error("resource limit: {0}")]
    Resource(String),
}

impl Error {
    /// Integration error not associated with a specific momentum mode.
    pub fn integration_msg(message: impl Into<String>) -> Self {
        Error::Integration {
            q: f64::NAN,
            message: message.into(),
        }
    }
}
