//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by geometry, interference, Monte Carlo and experiment code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter or parameter combination violates its documented domain.
    /// These are caller errors: the message names the violated constraint.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Adaptive quadrature hit its maximum subdivision depth before meeting
    /// the requested tolerance. Never silently degraded into a result.
    #[error(
        "quadrature did not converge on [{a:.6e}, {b:.6e}]: \
         error estimate {error_estimate:.3e} after max depth {max_depth}"
    )]
    QuadratureNonConvergence {
        a: f64,
        b: f64,
        error_estimate: f64,
        max_depth: u32,
    },

    /// An internally computed quantity violated an invariant that only a
    /// numerical bug can violate (e.g. a composite INR below -1e-9).
    #[error("internal consistency violation: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
