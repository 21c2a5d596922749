//! Period lattice, escape time, and the discrete periodicity conditions.
//!
//! With the four turning points labeled `x₀..x₃`, the analytic orbit is a
//! Möbius function of `sn²(u, κ²)` with
//!
//! ```text
//! κ² = (x₁−x₂)(x₀−x₃) / ((x₀−x₂)(x₁−x₃)),    z = √(a(x₀−x₂)(x₁−x₃)),
//! ```
//!
//! and `u = z·e^{iπ/2}·t` (the integration constant is fixed to α = 0, i.e.
//! the orbit starts at the turning point x₁ with p = 0). Complex time shifts
//! that return the orbit to its start form the lattice image
//!
//! ```text
//! T(m, n) = (4mK + 2niK′)·e^{−iπ/2} / z ,       m, n ∈ ℤ,
//! ```
//!
//! and the orbit is *physically* periodic when some T(m, n) is real and the
//! orbit has not already escaped: the trajectory denominator vanishes when
//! `sn²(u) = z₀²`, `z₀ = √((x₀−x₂)/(x₁−x₂))`, which sends |x| → ∞ at the
//! escape time T_∞ if that happens at real positive t.
//!
//! For the pure quartic family `H = p² + μ_r e^{iθ} x⁴` the condition
//! collapses to a closed form: θ = 4·arctan[n/(2m+n)] and the period is a
//! lemniscatic constant times an algebraic factor.

use crate::elliptic::{complete_k, complete_k_prime, inverse_sn};
use crate::error::{Error, Result};
use crate::quartic::{solve_turning_points, QuarticSystem, TurningPoints};
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);
/// The factor e^{−iπ/2}, kept symbolic (an exact −i) rather than evaluated
/// through transcendental functions.
const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

/// Elliptic modulus data derived from a turning-point labeling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticData {
    /// Squared modulus κ².
    pub kappa_sq: Complex64,
    /// Complementary squared modulus, stored as exactly `1 − κ²`.
    pub kappa_prime_sq: Complex64,
    /// Complete integral K(κ²).
    pub big_k: Complex64,
    /// Complementary complete integral K′(κ²).
    pub big_k_prime: Complex64,
}

/// Everything the period and escape formulas need, for one labeling of the
/// turning points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicityContext {
    pub tp: TurningPoints,
    /// Scale factor z = √(a(x₀−x₂)(x₁−x₃)).
    pub z: Complex64,
    pub ell: EllipticData,
    /// Escape argument z₀ = √((x₀−x₂)/(x₁−x₂)).
    pub z0: Complex64,
}

/// A parameter point where the (m, n) orbit is periodic, as located by the
/// scans.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicSolution {
    pub m: i64,
    pub n: i64,
    /// The scanned parameter: a phase θ in radians, or a real energy E,
    /// depending on the scan mode.
    pub located_parameter: f64,
    /// The real period of the orbit (time units, positive).
    pub t_p: f64,
    /// |Im T| left over after refinement, before taking the real part.
    pub residual: f64,
    /// Cyclic turning-point relabeling (0–3) under which the period lattice
    /// coordinates (m, n) describe a real period.
    pub relabeling: u8,
    /// Index of the turning-point pairing representative composed with the
    /// cyclic shift; see `scan::LABELINGS`. Energy scans use 0–2; θ scans
    /// use 0–5, where values ≥ 3 mean pairing − 3 applied after swapping the
    /// first two roots of the tracked ordering (the role assignments the
    /// twelve labelings alone cannot reach).
    pub pairing: u8,
}

/// Builds the periodicity context for a system, using the canonical
/// turning-point labeling.
pub fn build_context(sys: &QuarticSystem) -> Result<PeriodicityContext> {
    context_from_turning_points(sys.a, solve_turning_points(sys)?)
}

/// Builds the context from an explicit (possibly relabeled) set of turning
/// points.
///
/// # Errors
///
/// [`Error::DegenerateRoots`] when a formula denominator vanishes, and
/// [`Error::SingularModulus`] (propagated) when κ² lands on 0 or 1.
pub fn context_from_turning_points(
    a: f64,
    tp: TurningPoints,
) -> Result<PeriodicityContext> {
    let [x0, x1, x2, x3] = tp.roots;
    let d02 = x0 - x2;
    let d13 = x1 - x3;
    let d12 = x1 - x2;
    let d03 = x0 - x3;
    let scale = tp.roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    let denom = d02 * d13;
    if denom.norm() < 1e-14 * scale * scale || d12.norm() < 1e-14 * scale {
        return Err(Error::DegenerateRoots {
            min_sep: d02.norm().min(d13.norm()).min(d12.norm()),
            scale,
        });
    }
    let kappa_sq = (d12 * d03) / denom;
    let ell = EllipticData {
        kappa_sq,
        kappa_prime_sq: Complex64::new(1.0, 0.0) - kappa_sq,
        big_k: complete_k(kappa_sq)?,
        big_k_prime: complete_k_prime(kappa_sq)?,
    };
    Ok(PeriodicityContext {
        tp,
        z: (a * denom).sqrt(),
        ell,
        z0: (d02 / d12).sqrt(),
    })
}

/// The complex period `T(m, n) = (4mK + 2niK′)·e^{−iπ/2}/z`.
///
/// Linear in (m, n); the pair (0, 0) is not a period and is rejected by a
/// debug assertion.
pub fn period(ctx: &PeriodicityContext, m: i64, n: i64) -> Complex64 {
    debug_assert!((m, n) != (0, 0), "(m, n) = (0, 0) is not a period");
    let lattice = 4.0 * m as f64 * ctx.ell.big_k + 2.0 * n as f64 * I * ctx.ell.big_k_prime;
    lattice * MINUS_I / ctx.z
}

/// Principal escape time `T_∞ = sn⁻¹(z₀)·e^{−iπ/2}/z` (with α = 0).
///
/// This is the complex time at which the trajectory denominator first
/// vanishes along the principal branch; whether the orbit actually escapes
/// depends on a *real positive* pole time existing — see
/// [`first_real_escape`].
pub fn escape_time(ctx: &PeriodicityContext) -> Result<Complex64> {
    Ok(inverse_sn(ctx.z0, ctx.ell.kappa_sq)? * MINUS_I / ctx.z)
}

/// Earliest real positive time, if any, at which the orbit hits a pole of
/// the trajectory denominator — i.e. escapes to infinity.
///
/// The denominator vanishes when `sn²(u) = z₀²`, whose solution set is
/// `u = ±sn⁻¹(z₀) + 2jK + 2l·iK′`. Each candidate maps to a time
/// `t = u·e^{−iπ/2}/z`; the search collects candidates with |Im t| below
/// 1e-8·max(1, |t|) and 0 < Re t ≤ t_max over a bounded block of the
/// lattice, large enough to cover several real periods.
pub fn first_real_escape(ctx: &PeriodicityContext, t_max: f64) -> Result<Option<f64>> {
    let u0 = inverse_sn(ctx.z0, ctx.ell.kappa_sq)?;
    let w1 = 2.0 * ctx.ell.big_k;
    let w2 = 2.0 * I * ctx.ell.big_k_prime;
    const N: i64 = 30;
    let mut best: Option<f64> = None;
    for &sign in &[1.0, -1.0] {
        for j in -N..=N {
            for l in -N..=N {
                let u = sign * u0 + j as f64 * w1 + l as f64 * w2;
                let t = u * MINUS_I / ctx.z;
                if t.im.abs() <= 1e-8 * t.norm().max(1.0)
                    && t.re > 1e-12
                    && t.re <= t_max
                    && best.is_none_or(|b| t.re < b)
                {
                    best = Some(t.re);
                }
            }
        }
    }
    Ok(best)
}

/// The rationality ratio `r = Im(2iK/z) / Im(K′/z)`.
///
/// `Im T(m, n) = 0` exactly when `n/m = r`, so periodic orbits exist for a
/// labeling precisely when r is rational.
///
/// # Errors
///
/// [`Error::DegenerateRatio`] when Im(K′/z) vanishes (then the period is
/// real only along the n = 0 axis).
pub fn rationality_ratio(ctx: &PeriodicityContext) -> Result<f64> {
    let kz = ctx.ell.big_k / ctx.z;
    let kpz = ctx.ell.big_k_prime / ctx.z;
    let denom = kpz.im;
    if denom.abs() < 1e-14 * kpz.norm().max(1.0) {
        return Err(Error::DegenerateRatio { denom });
    }
    Ok((2.0 * I * kz).im / denom)
}

/// A real element of the period lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealPeriod {
    /// Coordinates of the period in the half-lattice basis
    /// `A = 2K·e^{−iπ/2}/z`, `B = 2iK′·e^{−iπ/2}/z`: `T = j·A + l·B`.
    pub j: i64,
    pub l: i64,
    /// The (positive) real period.
    pub t: f64,
}

/// Finds the smallest real element of the *physical* period lattice of the
/// orbit, if one exists with denominator ≤ `max_den`.
///
/// The orbit returns to its start whenever u advances by `2jK + 2l·iK′` for
/// any integers j, l (both x and p depend only on sn² and the product
/// sn·cn·dn, which share that half lattice — the labeled form `(4mK+2niK′)`
/// is the sublattice with even j). Realness of `T = jA + lB` requires
/// `j/l = −Im B/Im A`, recognized here through continued-fraction
/// convergents and verified to 1e-8 relative.
pub fn real_period(ctx: &PeriodicityContext, max_den: u64) -> Option<RealPeriod> {
    let a = 2.0 * ctx.ell.big_k * MINUS_I / ctx.z;
    let b = 2.0 * I * ctx.ell.big_k_prime * MINUS_I / ctx.z;
    let accept = |j: i64, l: i64| -> Option<RealPeriod> {
        let t = j as f64 * a + l as f64 * b;
        let scale = j.unsigned_abs() as f64 * a.norm() + l.unsigned_abs() as f64 * b.norm();
        if t.im.abs() <= 1e-8 * scale && t.re.abs() > 1e-12 * scale {
            let (j, l, tr) = if t.re > 0.0 { (j, l, t.re) } else { (-j, -l, -t.re) };
            Some(RealPeriod { j, l, t: tr })
        } else {
            None
        }
    };
    // Axes first: they are the ρ = ±∞ and ρ = 0 cases.
    if a.im.abs() <= 1e-10 * a.norm() {
        if let Some(rp) = accept(1, 0) {
            return Some(rp);
        }
    }
    if b.im.abs() <= 1e-10 * b.norm() {
        if let Some(rp) = accept(0, 1) {
            return Some(rp);
        }
    }
    let rho = -b.im / a.im;
    for (p, q) in convergents(rho, max_den) {
        if let Some(rp) = accept(p, q as i64) {
            return Some(rp);
        }
    }
    None
}

/// Continued-fraction convergents p/q of `x` with q ≤ `max_den`, in order of
/// increasing denominator.
pub fn convergents(x: f64, max_den: u64) -> Vec<(i64, u64)> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1): (i64, i64) = (1, x.floor() as i64);
    let (mut q0, mut q1): (i64, i64) = (0, 1);
    out.push((h1, 1));
    let mut frac = x - x.floor();
    for _ in 0..40 {
        if frac.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        let digit = inv.floor();
        frac = inv - digit;
        let d = digit as i64;
        let h2 = match d.checked_mul(h1).and_then(|v| v.checked_add(h0)) {
            Some(v) => v,
            None => break,
        };
        let q2 = match d.checked_mul(q1).and_then(|v| v.checked_add(q0)) {
            Some(v) => v,
            None => break,
        };
        if q2 as u64 > max_den {
            break;
        }
        out.push((h2, q2 as u64));
        h0 = h1;
        h1 = h2;
        q0 = q1;
        q1 = q2;
    }
    out
}

/// The quantized phase `θ = 4·arctan[n/(2m+n)]` at which the pure quartic
/// `H = p² + μ_r e^{iθ} x⁴` has a periodic orbit labeled (m, n).
///
/// When `2m + n = 0` the arctangent of ±∞ gives θ = ±2π (the Hermitian
/// quartic approached through a full turn, signed by n); θ(n=0) = 0 is the
/// Hermitian case and θ(m=0) = π the wrong-sign quartic −μ_r x⁴. The range
/// is therefore [−2π, 2π].
pub fn pure_quartic_angle(m: i64, n: i64) -> f64 {
    assert!((m, n) != (0, 0), "(m, n) = (0, 0) does not label an orbit");
    4.0 * (n as f64 / (2 * m + n) as f64).atan()
}

/// Closed-form real period of the pure-quartic orbit labeled (m, n):
///
/// ```text
/// T = K(−1) · [(2m+n)·cos(θ/4) + n·sin(θ/4)] / (μ_r E)^{1/4},
/// ```
///
/// with θ from [`pure_quartic_angle`] (which makes the complementary
/// combination vanish, so T is real). The magnitude is returned: labels
/// traversed in reverse give the same physical period.
pub fn pure_quartic_period(mu_r: f64, e: f64, m: i64, n: i64) -> f64 {
    assert!(
        mu_r > 0.0 && e > 0.0,
        "pure-quartic period needs μ_r > 0 and E > 0"
    );
    let theta = pure_quartic_angle(m, n);
    let k_lem = complete_k(Complex64::new(-1.0, 0.0))
        .expect("κ² = −1 is a regular modulus")
        .re;
    let (s, c) = (theta / 4.0).sin_cos();
    let real_part = (2 * m + n) as f64 * c + n as f64 * s;
    debug_assert!(
        ((2 * m + n) as f64 * s - n as f64 * c).abs() <= 1e-9 * real_part.abs().max(1.0),
        "angle choice must cancel the imaginary part"
    );
    k_lem * real_part.abs() / (mu_r * e).powf(0.25)
}
