//! Trajectory generation and phase-space closure detection.
//!
//! Two independent generators serve as oracles for each other:
//!
//! * [`analytic_trajectory`] evaluates the closed-form orbit
//!   `x(t) = (x₁(x₀−x₂) − x₀(x₁−x₂)·sn²(u)) / ((x₀−x₂) − (x₁−x₂)·sn²(u))`
//!   with `u = z·e^{iπ/2}·t` and momentum `p = ẋ/2`;
//! * [`ode_trajectory`] integrates Hamilton's equations `ẋ = 2p`,
//!   `ṗ = −V′(x)` with an adaptive Dormand–Prince 5(4) pair. Integrating the
//!   first-order system sidesteps the square-root branch tracking that the
//!   `p = ±√(E−V)` form would need; the root form only fixes the initial
//!   condition `p(0) = 0` at a turning point.
//!
//! [`detect_closure`] decides periodicity by interpolating the phase-space
//! return distance at a candidate period and refining the period in a ±2%
//! window.

use crate::error::{Error, Result};
use crate::periodicity::PeriodicityContext;
use crate::quartic::QuarticSystem;
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// One phase-space sample of an orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x: Complex64,
    pub p: Complex64,
}

/// A computed orbit segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Samples with strictly increasing t, starting at t = 0.
    pub samples: Vec<Sample>,
    /// Refined period, set by closure detection when the orbit closes.
    pub measured_period: Option<f64>,
    pub closed: bool,
    /// Max over samples of |H(x,p) − E| / max(1, |E|).
    pub max_energy_drift: f64,
}

impl Trajectory {
    fn new(samples: Vec<Sample>, max_energy_drift: f64) -> Self {
        Self {
            samples,
            measured_period: None,
            closed: false,
            max_energy_drift,
        }
    }

    /// Largest |x| + |p| over the samples; the scale used by closure tests.
    pub fn phase_scale(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.x.norm() + s.p.norm())
            .fold(0.0, f64::max)
    }

    pub fn span(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }
}

/// The Möbius image of `sn² = s`: the orbit position as a function of the
/// squared elliptic function. Exposed because the algebra is shared by the
/// trajectory formula and by tests of its turning-point values
/// (s = 0 → x₁, s = 1 → x₂).
pub fn x_of_sn_sq(ctx: &PeriodicityContext, s: Complex64) -> Result<Complex64> {
    let [x0, x1, x2, _] = ctx.tp.roots;
    let d02 = x0 - x2;
    let d12 = x1 - x2;
    let den = d02 - d12 * s;
    if den.norm() < 1e-8 * d02.norm() {
        return Err(Error::PoleProximity { dist: den.norm() });
    }
    Ok((x1 * d02 - x0 * d12 * s) / den)
}

/// Evaluates the analytic orbit on a time grid.
///
/// The grid must be non-negative and strictly increasing from 0. `x(0) = x₁`
/// holds exactly (bitwise) and `p(0) = 0`: the orbit starts at the turning
/// point x₁ of the context's labeling. `sys` supplies the Hamiltonian for
/// the energy-drift diagnostic and must be the system the context was built
/// from (up to relabeling).
///
/// # Errors
///
/// [`Error::PoleProximity`] when a grid point lands within 1e-8·|x₀−x₂| of
/// a zero of the trajectory denominator (the orbit is escaping there).
pub fn analytic_trajectory(
    ctx: &PeriodicityContext,
    sys: &QuarticSystem,
    t_grid: &[f64],
) -> Result<Trajectory> {
    if t_grid.first() != Some(&0.0) {
        return Err(Error::InvalidInput(
            "analytic trajectory grid must start at t = 0".into(),
        ));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "analytic trajectory grid must be strictly increasing".into(),
        ));
    }
    let [x0, x1, x2, _] = ctx.tp.roots;
    let d02 = x0 - x2;
    let d12 = x1 - x2;
    let d10 = x1 - x0;
    let p_num = I * ctx.z * d12 * d02 * d10;
    let e_scale = 1.0f64.max(sys.e.norm());

    let mut samples = Vec::with_capacity(t_grid.len());
    let mut drift = 0.0f64;
    for &t in t_grid {
        if t == 0.0 {
            samples.push(Sample {
                t,
                x: x1,
                p: Complex64::new(0.0, 0.0),
            });
            continue;
        }
        let u = I * ctx.z * t;
        let (sn, cn, dn) = match crate::elliptic::jacobi_sn_cn_dn(u, ctx.ell.kappa_sq) {
            Ok(triple) => triple,
            // A pole of sn is a *regular* point of the orbit: as sn² → ∞
            // the Möbius map sends x → x₀ and p → 0 (x₀ is a turning
            // point — the orbit is transiting the second member of its
            // turning-point pair). The deviation from the limit is O(w²)
            // in the distance w to the pole, far below the pole guard.
            Err(Error::PoleProximity { .. }) => {
                drift = drift.max((sys.hamiltonian(x0, Complex64::ZERO) - sys.e).norm() / e_scale);
                samples.push(Sample {
                    t,
                    x: x0,
                    p: Complex64::ZERO,
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let s = sn * sn;
        let den = d02 - d12 * s;
        if den.norm() < 1e-8 * d02.norm() {
            return Err(Error::PoleProximity { dist: den.norm() });
        }
        let x = (x1 * d02 - x0 * d12 * s) / den;
        let p = p_num * sn * cn * dn / (den * den);
        drift = drift.max((sys.hamiltonian(x, p) - sys.e).norm() / e_scale);
        samples.push(Sample { t, x, p });
    }
    Ok(Trajectory::new(samples, drift))
}

/// Integrates Hamilton's equations for `sys` from `(x0, p0)` to `t_end`.
///
/// Adaptive Dormand–Prince 5(4) with absolute and relative tolerance 1e-10;
/// accepted steps are capped at `dt_max` and recorded as samples. The
/// initial state must actually lie on the energy surface:
/// |H(x0,p0) − E| ≤ 1e-10·max(1, |E|).
///
/// # Errors
///
/// [`Error::Blowup`] when |x| exceeds 10⁶ times the initial scale (the
/// orbit is escaping), [`Error::StepUnderflow`] when the controller drives
/// the step below 1e-14.
pub fn ode_trajectory(
    sys: &QuarticSystem,
    x0: Complex64,
    p0: Complex64,
    t_end: f64,
    dt_max: f64,
) -> Result<Trajectory> {
    let sys = *sys;
    let force = move |x: Complex64| -sys.potential_gradient(x);
    let hamil = move |x: Complex64, p: Complex64| sys.hamiltonian(x, p);
    integrate(force, hamil, sys.e, x0, p0, t_end, dt_max)
}

/// Like [`ode_trajectory`] but for the pure quartic `H = p² + μ x⁴` with a
/// complex stiffness μ (the phase-rotated family has no real-coefficient
/// representation in `QuarticSystem`).
pub fn ode_trajectory_mu(
    mu: Complex64,
    e: Complex64,
    x0: Complex64,
    p0: Complex64,
    t_end: f64,
    dt_max: f64,
) -> Result<Trajectory> {
    let force = move |x: Complex64| -4.0 * mu * x * x * x;
    let hamil = move |x: Complex64, p: Complex64| p * p + mu * x * x * x * x;
    integrate(force, hamil, e, x0, p0, t_end, dt_max)
}

/// Dormand–Prince 5(4) driver on the complexified system treated as four
/// real components.
fn integrate(
    force: impl Fn(Complex64) -> Complex64,
    hamil: impl Fn(Complex64, Complex64) -> Complex64,
    e_ref: Complex64,
    x0: Complex64,
    p0: Complex64,
    t_end: f64,
    dt_max: f64,
) -> Result<Trajectory> {
    // Tighter than the 1e-10 drift contract on purpose: periodic orbits can
    // pass close to an escape pole (|p| spikes by two orders of magnitude),
    // and the global error amplified through such a transit must stay below
    // the 1e-6·scale oracle-equivalence budget.
    const TOL: f64 = 1e-13;
    let e_scale = 1.0f64.max(e_ref.norm());
    if (hamil(x0, p0) - e_ref).norm() > 1e-10 * e_scale {
        return Err(Error::InvalidInput(format!(
            "initial state off the energy surface: |H(x0,p0) − E| = {:.3e}",
            (hamil(x0, p0) - e_ref).norm()
        )));
    }
    if !(t_end > 0.0) || !(dt_max > 0.0) {
        return Err(Error::InvalidInput(
            "ode integration needs t_end > 0 and dt_max > 0".into(),
        ));
    }

    let deriv = |x: Complex64, p: Complex64| (2.0 * p, force(x));
    let blowup_scale = 1e6 * x0.norm().max(1.0);

    let mut t = 0.0f64;
    let (mut x, mut p) = (x0, p0);
    let mut h = dt_max.min(t_end * 1e-3).max(1e-12);
    let mut samples = vec![Sample { t, x, p }];
    let mut drift = 0.0f64;

    for _ in 0..5_000_000u32 {
        if t >= t_end {
            let traj = Trajectory::new(samples, drift);
            return Ok(traj);
        }
        h = h.min(dt_max).min(t_end - t);
        if h < 1e-14 {
            return Err(Error::StepUnderflow { t, h });
        }

        // Dormand–Prince stages.
        let (k1x, k1p) = deriv(x, p);
        let (k2x, k2p) = deriv(x + h * 0.2 * k1x, p + h * 0.2 * k1p);
        let (k3x, k3p) = deriv(
            x + h * (0.075 * k1x + 0.225 * k2x),
            p + h * (0.075 * k1p + 0.225 * k2p),
        );
        let (k4x, k4p) = deriv(
            x + h * (44.0 / 45.0 * k1x - 56.0 / 15.0 * k2x + 32.0 / 9.0 * k3x),
            p + h * (44.0 / 45.0 * k1p - 56.0 / 15.0 * k2p + 32.0 / 9.0 * k3p),
        );
        let (k5x, k5p) = deriv(
            x + h * (19372.0 / 6561.0 * k1x - 25360.0 / 2187.0 * k2x
                + 64448.0 / 6561.0 * k3x
                - 212.0 / 729.0 * k4x),
            p + h * (19372.0 / 6561.0 * k1p - 25360.0 / 2187.0 * k2p
                + 64448.0 / 6561.0 * k3p
                - 212.0 / 729.0 * k4p),
        );
        let (k6x, k6p) = deriv(
            x + h * (9017.0 / 3168.0 * k1x - 355.0 / 33.0 * k2x + 46732.0 / 5247.0 * k3x
                + 49.0 / 176.0 * k4x
                - 5103.0 / 18656.0 * k5x),
            p + h * (9017.0 / 3168.0 * k1p - 355.0 / 33.0 * k2p + 46732.0 / 5247.0 * k3p
                + 49.0 / 176.0 * k4p
                - 5103.0 / 18656.0 * k5p),
        );
        let x5 = x + h
            * (35.0 / 384.0 * k1x + 500.0 / 1113.0 * k3x + 125.0 / 192.0 * k4x
                - 2187.0 / 6784.0 * k5x
                + 11.0 / 84.0 * k6x);
        let p5 = p + h
            * (35.0 / 384.0 * k1p + 500.0 / 1113.0 * k3p + 125.0 / 192.0 * k4p
                - 2187.0 / 6784.0 * k5p
                + 11.0 / 84.0 * k6p);
        let (k7x, k7p) = deriv(x5, p5);

        // Embedded error estimate (5th minus 4th order weights).
        let ex = h * (71.0 / 57600.0 * k1x - 71.0 / 16695.0 * k3x + 71.0 / 1920.0 * k4x
            - 17253.0 / 339200.0 * k5x
            + 22.0 / 525.0 * k6x
            - 0.025 * k7x);
        let ep = h * (71.0 / 57600.0 * k1p - 71.0 / 16695.0 * k3p + 71.0 / 1920.0 * k4p
            - 17253.0 / 339200.0 * k5p
            + 22.0 / 525.0 * k6p
            - 0.025 * k7p);
        let sx = TOL + TOL * x.norm().max(x5.norm());
        let sp = TOL + TOL * p.norm().max(p5.norm());
        let err = ((ex.norm() / sx).powi(2) + (ep.norm() / sp).powi(2)).sqrt()
            / std::f64::consts::SQRT_2;

        if err <= 1.0 {
            t += h;
            if t_end - t < 1e-14 * t_end {
                t = t_end;
            }
            x = x5;
            p = p5;
            if x.norm() > blowup_scale {
                return Err(Error::Blowup {
                    t,
                    abs_x: x.norm(),
                });
            }
            drift = drift.max((hamil(x, p) - e_ref).norm() / e_scale);
            samples.push(Sample { t, x, p });
        }
        let fac = if err > 0.0 {
            0.9 * err.powf(-0.2)
        } else {
            5.0
        };
        h *= fac.clamp(0.2, 5.0);
    }
    Err(Error::NonConvergent {
        what: "ode step budget",
        iters: 5_000_000,
    })
}

/// Interpolates the orbit state at time `t` between samples.
///
/// The position uses a local cubic Hermite on the bracketing interval — its
/// exact derivative ẋ = 2p is part of the sample data. The momentum, whose
/// derivative is not stored, uses a 4-point Lagrange cubic of the same
/// O(h⁴) order. Both errors sit far below the closure tolerance at the step
/// caps the scans use.
pub fn sample_state(samples: &[Sample], t: f64) -> Result<(Complex64, Complex64)> {
    if samples.len() < 4 {
        return Err(Error::InvalidInput(
            "state interpolation needs at least 4 samples".into(),
        ));
    }
    let n = samples.len();
    let idx = samples.partition_point(|s| s.t < t);

    // Hermite for x on the bracketing interval.
    let hi = idx.clamp(1, n - 1);
    let (s0, s1) = (&samples[hi - 1], &samples[hi]);
    let dt = s1.t - s0.t;
    let s = (t - s0.t) / dt;
    let (s2, s3) = (s * s, s * s * s);
    let x = (2.0 * s3 - 3.0 * s2 + 1.0) * s0.x
        + (s3 - 2.0 * s2 + s) * dt * (2.0 * s0.p)
        + (-2.0 * s3 + 3.0 * s2) * s1.x
        + (s3 - s2) * dt * (2.0 * s1.p);

    // Lagrange cubic for p on a centered 4-point window.
    let w = idx.saturating_sub(2).min(n - 4);
    let node = &samples[w..w + 4];
    let mut p = Complex64::ZERO;
    for j in 0..4 {
        let mut weight = 1.0;
        for i in 0..4 {
            if i != j {
                weight *= (t - node[i].t) / (node[j].t - node[i].t);
            }
        }
        p += weight * node[j].p;
    }
    Ok((x, p))
}

/// Result of a closure test against a candidate period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureCheck {
    /// Whether the phase-space return distance at the candidate period is
    /// within 1e-6 of the trajectory scale.
    pub closed: bool,
    /// Period refined by minimizing the return distance in a ±2% window;
    /// set only when closed.
    pub measured_period: Option<f64>,
    /// Return distance at the candidate period, |Δx| + |Δp|.
    pub residual: f64,
    /// max(|x| + |p|) over the trajectory, the normalization of `residual`.
    pub scale: f64,
}

/// Tests whether `traj` closes after `candidate_period`.
///
/// The trajectory must extend at least 10% past the candidate so the ±2%
/// refinement window is interpolated, never extrapolated.
pub fn detect_closure(traj: &Trajectory, candidate_period: f64) -> Result<ClosureCheck> {
    if !(candidate_period > 0.0) {
        return Err(Error::InvalidInput(
            "closure candidate period must be positive".into(),
        ));
    }
    let span = traj.span();
    if span < 1.1 * candidate_period {
        return Err(Error::InsufficientSpan {
            span,
            candidate: candidate_period,
        });
    }
    let start = traj.samples[0];
    let scale = traj.phase_scale();
    let dist = |t: f64| -> Result<f64> {
        let (x, p) = sample_state(&traj.samples, t)?;
        Ok((x - start.x).norm() + (p - start.p).norm())
    };

    let residual = dist(candidate_period)?;
    let closed = residual <= 1e-6 * scale;

    // Golden-section refinement of the return time in a ±2% window.
    let mut lo = (0.98 * candidate_period).max(traj.samples[1].t);
    let mut hi = (1.02 * candidate_period).min(span);
    const PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - PHI * (hi - lo);
    let mut d = lo + PHI * (hi - lo);
    let mut fc = dist(c)?;
    let mut fd = dist(d)?;
    for _ in 0..70 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - PHI * (hi - lo);
            fc = dist(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + PHI * (hi - lo);
            fd = dist(d)?;
        }
    }
    let t_star = 0.5 * (lo + hi);

    Ok(ClosureCheck {
        closed,
        measured_period: closed.then_some(t_star),
        residual,
        scale,
    })
}
