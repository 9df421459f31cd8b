//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature stopped before reaching the requested tolerance.
    #[error("quadrature did not converge: requested {requested:.3e}, achieved {achieved:.3e} after {intervals} intervals")]
    QuadratureNonConvergence {
        requested: f64,
        achieved: f64,
        intervals: usize,
    },

    /// Adaptive ODE step size shrank below the resolvable scale.
    #[error("step size underflow at r = {r:.6e} (h = {h:.3e})")]
    StepSizeUnderflow { r: f64, h: f64 },

    /// State left the representable range despite renormalization.
    #[error("wavefunction overflow despite renormalization at r = {r:.6e}")]
    ShootingOverflow { r: f64 },

    /// Truncation radius gives too small a WKB decay exponent.
    #[error("r_max = {r_max:.4} insufficient: decay exponent {achieved:.2} < {required:.2}")]
    RMaxInsufficient {
        r_max: f64,
        achieved: f64,
        required: f64,
    },

    /// No sign change of the matching function near the WKB seed.
    #[error("bracket failure for level n = {n}: no sign change in scanned interval [{lo:.8e}, {hi:.8e}]")]
    BracketFailure { n: usize, lo: f64, hi: f64 },

    /// Root iteration hit the iteration cap.
    #[error("root finding did not converge for level n = {n} (last interval [{lo:.8e}, {hi:.8e}])")]
    RootNonConvergence { n: usize, lo: f64, hi: f64 },

    /// Partition sum truncation failed before the tail bound was met.
    #[error("partition sum truncation failure: {terms} terms, tail bound {bound:.3e} > target {target:.3e}")]
    TruncationFailure {
        terms: usize,
        bound: f64,
        target: f64,
    },

    /// A spectrum source cannot produce the requested level.
    #[error("spectrum source has no level n = {n} (limit {limit})")]
    LevelUnavailable { n: usize, limit: usize },

    /// A contour ray lies in (or on the boundary of) a forbidden wedge.
    #[error("ray at theta = {theta:.6} lies in the forbidden wedge [{lo:.6}, {hi:.6}]")]
    ForbiddenContour { theta: f64, lo: f64, hi: f64 },

    /// Contours live in different allowed-wedge systems and may legitimately
    /// give different results.
    #[error("contours lie in different wedge systems ({detail})")]
    DifferentWedgeSystems { detail: String },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
