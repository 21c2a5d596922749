//! Error type shared by all numerical kernels.

use num_complex::Complex64;
use thiserror::Error;

/// Failure modes of the numerical kernels.
///
/// Each variant names the computation that failed and carries enough context
/// to diagnose the parameter point, so callers (the scans, the CLI) can
/// either skip the point or surface a precise message.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two turning points coincide within the relative separation threshold.
    /// The elliptic-modulus formulas divide by root differences, so such
    /// parameter points must be rejected rather than evaluated.
    #[error("degenerate turning points: minimum separation {min_sep:.3e} at scale {scale:.3e}")]
    DegenerateRoots { min_sep: f64, scale: f64 },

    /// An iteration (root polishing, Carlson duplication, Landen descent…)
    /// did not reach its tolerance within the iteration budget.
    #[error("{what} failed to converge within {iters} iterations")]
    NonConvergent { what: &'static str, iters: u32 },

    /// The elliptic modulus sits on a singular point of the requested
    /// integral (κ² = 1 for K, κ² = 0 for K′).
    #[error("singular modulus κ² = {kappa_sq} for {what}")]
    SingularModulus {
        kappa_sq: Complex64,
        what: &'static str,
    },

    /// The evaluation point is too close to a pole of the elliptic function
    /// (or of the analytic trajectory) for the result to carry any accuracy.
    #[error("argument within {dist:.3e} of a pole")]
    PoleProximity { dist: f64 },

    /// Im(K′/z) vanishes, so the rationality ratio r = Im(2iK/z)/Im(K′/z)
    /// is undefined: the period is real for n = 0 alone.
    #[error("rationality ratio undefined: Im(K'/z) = {denom:.3e}")]
    DegenerateRatio { denom: f64 },

    /// The integrated orbit escaped: |x| exceeded the blow-up threshold.
    #[error("trajectory blow-up at t = {t:.6} (|x| = {abs_x:.3e})")]
    Blowup { t: f64, abs_x: f64 },

    /// The step controller drove the step size below the representable
    /// minimum, usually because the orbit ran into a pole.
    #[error("step size underflow at t = {t:.6} (h = {h:.3e})")]
    StepUnderflow { t: f64, h: f64 },

    /// A trajectory is too short to test the requested closure candidate.
    #[error("trajectory spans {span:.6} but candidate period {candidate:.6} needs 10% margin")]
    InsufficientSpan { span: f64, candidate: f64 },

    /// A caller-supplied parameter violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
