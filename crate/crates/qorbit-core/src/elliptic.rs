//! Elliptic integrals and Jacobi functions for complex modulus.
//!
//! Everything is built on Carlson's symmetric integral
//! `R_F(x,y,z) = ½∫₀^∞ dt/√((t+x)(t+y)(t+z))`, evaluated by the duplication
//! theorem. The complete integral of the first kind is `K(κ²) = R_F(0, 1−κ², 1)`
//! and its complement is `K′(κ²) = R_F(0, κ², 1)`.
//!
//! Branch policy: every square root inside the duplication iteration is the
//! *principal* branch (cut along the negative real axis). That single choice
//! fixes the analytic continuation of all the integrals off the real modulus
//! interval. The anchor case is lemniscatic, κ² = −1 (so κ′² = 2): the
//! principal branch yields `K′(−1) = K(−1)·(1−i)`, the continuation of
//! `K(κ′²)` onto the cut κ′² > 1 from the upper half-plane. Unit tests assert
//! this identity rather than assuming it.
//!
//! Jacobi `sn`, `cn`, `dn` are computed by a descending Landen
//! transformation after reducing the argument modulo the common period
//! lattice `{4K, 4iK′}`, with a Newton inversion of the incomplete integral
//! as a fallback when the Landen sequence stalls.

use crate::error::{Error, Result};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Carlson's symmetric elliptic integral `R_F(x, y, z)` on the principal
/// branch, by the duplication theorem with a fifth-order tail expansion.
///
/// Relative accuracy is ~1e-14 for arguments away from the degenerate case
/// of two simultaneous zeros (where the integral diverges and the iteration
/// reports [`Error::NonConvergent`]).
pub fn carlson_rf(x: Complex64, y: Complex64, z: Complex64) -> Result<Complex64> {
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..100 {
        let mu = (x + y + z) / 3.0;
        let spread = (x - mu)
            .norm()
            .max((y - mu).norm())
            .max((z - mu).norm());
        if spread <= 1e-5 * mu.norm() {
            // Fifth-order Taylor tail: with spread/|μ| = ε ≤ 1e-5 the
            // truncation error is O(ε⁶) ≈ 1e-30, far below double precision.
            let dx = (mu - x) / mu;
            let dy = (mu - y) / mu;
            let dz = (mu - z) / mu;
            let e2 = dx * dy + dy * dz + dz * dx;
            let e3 = dx * dy * dz;
            let series =
                ONE - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 / 44.0 * e2 * e3;
            return Ok(series / mu.sqrt());
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        x = (x + lambda) * 0.25;
        y = (y + lambda) * 0.25;
        z = (z + lambda) * 0.25;
    }
    Err(Error::NonConvergent {
        what: "carlson_rf duplication",
        iters: 100,
    })
}

/// Complete elliptic integral of the first kind, `K(κ²) = R_F(0, 1−κ², 1)`,
/// as a function of the squared modulus.
///
/// # Errors
///
/// [`Error::SingularModulus`] within 1e-14 of κ² = 1, where K diverges
/// logarithmically.
pub fn complete_k(kappa_sq: Complex64) -> Result<Complex64> {
    if (kappa_sq - ONE).norm() < 1e-14 {
        return Err(Error::SingularModulus {
            kappa_sq,
            what: "complete_k",
        });
    }
    carlson_rf(ZERO, ONE - kappa_sq, ONE)
}

/// Complementary complete integral `K′(κ²) = K(1−κ²) = R_F(0, κ², 1)`.
///
/// For κ² off the real interval (0, 1) this is the principal-branch
/// continuation; see the module docs for the branch anchor.
///
/// # Errors
///
/// [`Error::SingularModulus`] within 1e-14 of κ² = 0.
pub fn complete_k_prime(kappa_sq: Complex64) -> Result<Complex64> {
    if kappa_sq.norm() < 1e-14 {
        return Err(Error::SingularModulus {
            kappa_sq,
            what: "complete_k_prime",
        });
    }
    carlson_rf(ZERO, kappa_sq, ONE)
}

/// Incomplete elliptic integral of the first kind,
/// `F(φ, κ²) = sin φ · R_F(cos²φ, 1 − κ² sin²φ, 1)`,
/// on the principal branch (valid for |Re φ| ≤ π/2).
pub fn incomplete_f(phi: Complex64, kappa_sq: Complex64) -> Result<Complex64> {
    let s = phi.sin();
    let c = phi.cos();
    Ok(s * carlson_rf(c * c, ONE - kappa_sq * s * s, ONE)?)
}

/// Principal inverse of `sn`: the `u` with `jacobi_sn(u, κ²) = s` and
/// `u = F(arcsin s, κ²)` on principal branches,
/// `u = s · R_F(1 − s², 1 − κ² s², 1)`.
pub fn inverse_sn(s: Complex64, kappa_sq: Complex64) -> Result<Complex64> {
    Ok(s * carlson_rf(ONE - s * s, ONE - kappa_sq * s * s, ONE)?)
}

/// Jacobi `sn(u, κ²)` for complex argument and modulus.
pub fn jacobi_sn(u: Complex64, kappa_sq: Complex64) -> Result<Complex64> {
    Ok(jacobi_sn_cn_dn(u, kappa_sq)?.0)
}

/// Jacobi `(sn, cn, dn)(u, κ²)` for complex argument and squared modulus.
///
/// The argument is first reduced modulo the lattice `{4K, 4iK′}` (the common
/// period lattice of all three functions), then evaluated by descending
/// Landen transformation down to the trigonometric limit. Near-singular
/// Landen sequences fall back to Newton inversion of [`inverse_sn`].
///
/// # Errors
///
/// [`Error::PoleProximity`] when `u` lies within `1e-8·max(1,|u|)` of the
/// pole lattice `{2jK + (2l+1)iK′}`.
pub fn jacobi_sn_cn_dn(
    u: Complex64,
    kappa_sq: Complex64,
) -> Result<(Complex64, Complex64, Complex64)> {
    // Trigonometric and hyperbolic limits.
    if kappa_sq.norm() < 1e-14 {
        return Ok((u.sin(), u.cos(), ONE));
    }
    if (kappa_sq - ONE).norm() < 1e-14 {
        let ch = u.cosh();
        if ch.norm() < 1e-8 {
            return Err(Error::PoleProximity { dist: ch.norm() });
        }
        return Ok((u.tanh(), 1.0 / ch, 1.0 / ch));
    }

    let kk = complete_k(kappa_sq)?;
    let kp = complete_k_prime(kappa_sq)?;
    let u_red = reduce_mod_lattice(u, 4.0 * kk, 4.0 * Complex64::new(0.0, 1.0) * kp);

    // Distance to the nearest pole 2jK + (2l+1)iK′, measured in the reduced
    // cell. Work in the (2K, iK′) basis: poles have integer first coordinate
    // and odd second coordinate.
    let (g1, g2) = lattice_coords(u_red, 2.0 * kk, Complex64::new(0.0, 1.0) * kp);
    let j = g1.round();
    let l_odd = 2.0 * ((g2 - 1.0) / 2.0).round() + 1.0;
    let pole_dist = ((g1 - j) * 2.0 * kk + (g2 - l_odd) * Complex64::new(0.0, 1.0) * kp).norm();
    if pole_dist < 1e-8 * u.norm().max(1.0) {
        return Err(Error::PoleProximity { dist: pole_dist });
    }

    landen_descent(u_red, kappa_sq).or_else(|_| newton_sn(u_red, kappa_sq))
}

/// Real coordinates (α, β) of `u = α·w1 + β·w2` in a lattice basis (w1, w2).
fn lattice_coords(u: Complex64, w1: Complex64, w2: Complex64) -> (f64, f64) {
    let det = w1.re * w2.im - w1.im * w2.re;
    if det.abs() < 1e-12 * w1.norm() * w2.norm() {
        // Degenerate (collapsed) lattice: skip reduction.
        return (0.0, 0.0);
    }
    let alpha = (u.re * w2.im - u.im * w2.re) / det;
    let beta = (w1.re * u.im - w1.im * u.re) / det;
    (alpha, beta)
}

/// Subtracts the nearest lattice vector of `{j·w1 + l·w2}` from `u`.
fn reduce_mod_lattice(u: Complex64, w1: Complex64, w2: Complex64) -> Complex64 {
    let (alpha, beta) = lattice_coords(u, w1, w2);
    u - alpha.round() * w1 - beta.round() * w2
}

/// Descending Landen transformation. Each step replaces the modulus k by
/// k₁ = (1 − k′)/(1 + k′) and rescales u; |k₁| ~ |k|²/4, so a handful of
/// steps reach the trigonometric regime, after which the recursion
///
/// ```text
/// sn(u, k) = (1 + k₁) sn(u₁, k₁) / (1 + k₁ sn²(u₁, k₁))
/// ```
///
/// (and its cn·dn companions) walks back up the modulus ladder.
fn landen_descent(
    u: Complex64,
    kappa_sq: Complex64,
) -> Result<(Complex64, Complex64, Complex64)> {
    let mut k = kappa_sq.sqrt();
    let mut u_desc = u;
    let mut ladder: Vec<Complex64> = Vec::with_capacity(12);
    let mut converged = false;
    for _ in 0..40 {
        if k.norm() < 1e-14 {
            converged = true;
            break;
        }
        let kp = (ONE - k * k).sqrt();
        let k1 = (ONE - kp) / (ONE + kp);
        u_desc /= ONE + k1;
        ladder.push(k1);
        k = k1;
    }
    if !converged {
        return Err(Error::NonConvergent {
            what: "landen descent",
            iters: 40,
        });
    }
    let mut s = u_desc.sin();
    let mut c = u_desc.cos();
    let mut d = ONE;
    for &k1 in ladder.iter().rev() {
        let den = ONE + k1 * s * s;
        let s_next = (ONE + k1) * s / den;
        let c_next = c * d / den;
        let d_next = (ONE - k1 * s * s) / den;
        s = s_next;
        c = c_next;
        d = d_next;
    }
    Ok((s, c, d))
}

/// Fallback for stalled Landen sequences: Newton iteration on
/// `inverse_sn(s) = u`, seeded with the trigonometric approximation.
/// `cn` and `dn` are completed from principal square roots.
fn newton_sn(u: Complex64, kappa_sq: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
    let mut s = u.sin();
    for _ in 0..60 {
        let f = inverse_sn(s, kappa_sq)? - u;
        if f.norm() <= 1e-13 * u.norm().max(1.0) {
            let c = (ONE - s * s).sqrt();
            let d = (ONE - kappa_sq * s * s).sqrt();
            return Ok((s, c, d));
        }
        // du/ds = 1/√((1−s²)(1−κ²s²)); Newton step is −f · ds/du.
        let deriv = ((ONE - s * s) * (ONE - kappa_sq * s * s)).sqrt();
        s -= f * deriv;
    }
    Err(Error::NonConvergent {
        what: "jacobi newton fallback",
        iters: 60,
    })
}
