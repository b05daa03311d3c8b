use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The classical momentum has no pair of distinct real turning points
    /// (complex or coincident roots of E - V_eff = 0).
    #[error("no classical region: {0}")]
    NoClassicalRegion(String),

    /// Requested start point lies outside the validity window of the
    /// leading Frobenius behaviour at the regular singular point.
    #[error("start point outside the series validity window: {0}")]
    StartWindow(String),

    #[error("step size underflow near {z}; a singularity is too close to the path")]
    StepSizeUnderflow { z: Complex64 },

    #[error("non-finite value encountered during propagation near {z}")]
    NonFinite { z: Complex64 },

    /// A wavefunction node lies on (or numerically too close to) a contour
    /// sample, so the momentum function cannot be evaluated there.
    #[error("solution vanishes at a contour sample near {z}")]
    NodeOnContour { z: Complex64 },

    #[error("contour quadrature did not converge within {max_samples} samples (last delta {last_delta:.3e})")]
    ContourNotConverged { max_samples: usize, last_delta: f64 },

    #[error("quadrature did not converge (last delta {last_delta:.3e})")]
    QuadratureNotConverged { last_delta: f64 },

    #[error("eigenvalue bracketing failed: {0}")]
    Bracketing(String),
}
