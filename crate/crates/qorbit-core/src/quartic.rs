//! Quartic Hamiltonians and their complex turning points.
//!
//! A system `H = p² + a x⁴ + b xᵏ` at energy `E` stops (`p = 0`) where
//! `a x⁴ + b xᵏ − E = 0`. The four complex roots of that polynomial are the
//! *turning points*; every downstream quantity (elliptic modulus, period
//! scale, escape argument) is a function of root differences, so this module
//! is responsible for producing the roots accurately and — because those
//! formulas are not symmetric in the roots — in a reproducible order.
//!
//! The canonical order sorts by the argument of `x_j − centroid`, ascending
//! in `(−π, π]`, with ties broken by modulus ascending. Arguments are
//! compared with a small tolerance: root configurations with exact ray
//! symmetry (which occur on whole parameter curves, e.g. `b = 1+i` at real
//! energy) would otherwise flip order under floating-point jitter.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Relative separation below which two turning points count as coincident.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Angular tolerance for the canonical-order tie break (radians).
///
/// Roots whose arguments agree to this tolerance are treated as lying on a
/// common ray and ordered by modulus. The value sits far above root-finder
/// noise (~1e-15) and far below any genuine angular separation that survives
/// the degeneracy check.
const ARG_TIE_TOL: f64 = 1e-9;

/// One-dimensional quartic Hamiltonian `H = p² + a x⁴ + b xᵏ` at complex
/// energy `e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticSystem {
    /// Coefficient of x⁴; real and nonzero.
    pub a: f64,
    /// Complex coefficient of the lower-order term.
    pub b: Complex64,
    /// Exponent of the lower-order term: 1 or 2.
    pub k: u8,
    /// Energy of the orbit under study.
    pub e: Complex64,
}

impl QuarticSystem {
    pub fn new(a: f64, b: Complex64, k: u8, e: Complex64) -> Result<Self> {
        if a == 0.0 || !a.is_finite() {
            return Err(Error::InvalidInput(format!(
                "quartic coefficient a must be finite and nonzero, got {a}"
            )));
        }
        if k != 1 && k != 2 {
            return Err(Error::InvalidInput(format!(
                "perturbation exponent k must be 1 or 2, got {k}"
            )));
        }
        Ok(Self { a, b, k, e })
    }

    /// Potential `V(x) = a x⁴ + b xᵏ`.
    pub fn potential(&self, x: Complex64) -> Complex64 {
        let x2 = x * x;
        let pert = if self.k == 1 { self.b * x } else { self.b * x2 };
        self.a * x2 * x2 + pert
    }

    /// `dV/dx = 4a x³ + k b x^{k−1}`.
    pub fn potential_gradient(&self, x: Complex64) -> Complex64 {
        let grad4 = 4.0 * self.a * x * x * x;
        if self.k == 1 {
            grad4 + self.b
        } else {
            grad4 + 2.0 * self.b * x
        }
    }

    /// `H(x, p) = p² + V(x)`.
    pub fn hamiltonian(&self, x: Complex64, p: Complex64) -> Complex64 {
        p * p + self.potential(x)
    }

    /// The turning-point polynomial `a x⁴ + b xᵏ − E`.
    pub fn char_poly(&self, x: Complex64) -> Complex64 {
        self.potential(x) - self.e
    }

    /// Derivative of [`char_poly`](Self::char_poly); used for Newton polish.
    fn char_poly_deriv(&self, x: Complex64) -> Complex64 {
        self.potential_gradient(x)
    }
}

/// The four turning points of a system, in canonical order `x₀, x₁, x₂, x₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoints {
    pub roots: [Complex64; 4],
}

impl TurningPoints {
    #[inline]
    pub fn x(&self, j: usize) -> Complex64 {
        self.roots[j]
    }
}

/// Solves `a x⁴ + b xᵏ = E` for the four turning points.
///
/// Roots come from a Durand–Kerner iteration on the monic polynomial,
/// followed by Newton polish on the original coefficients, and are returned
/// in canonical order. Identical inputs yield bitwise-identical outputs: the
/// iteration has fixed starting points and a fixed evaluation order.
///
/// # Errors
///
/// [`Error::DegenerateRoots`] when two roots coincide within
/// [`DEGENERACY_TOL`] relative separation — the downstream modulus formulas
/// divide by root differences, so such points must be rejected.
/// [`Error::NonConvergent`] if the residual bound cannot be met.
pub fn solve_turning_points(sys: &QuarticSystem) -> Result<TurningPoints> {
    // Monic coefficients: x⁴ + c₂x² + c₁x + c₀ (no cubic term).
    let inv_a = Complex64::new(1.0 / sys.a, 0.0);
    let c0 = -sys.e * inv_a;
    let (c1, c2) = if sys.k == 1 {
        (sys.b * inv_a, Complex64::new(0.0, 0.0))
    } else {
        (Complex64::new(0.0, 0.0), sys.b * inv_a)
    };

    // Durand–Kerner from the standard seed ratio (0.4 + 0.9i)ʲ, scaled by a
    // Cauchy-style root bound. The seed is deliberately not a root of unity:
    // for k = 2 the roots themselves sit in ± pairs and a symmetric start
    // could stall on the symmetry.
    let bound = 1.0 + c0.norm().max(c1.norm()).max(c2.norm());
    let seed = Complex64::new(0.4, 0.9);
    let mut r = [Complex64::new(0.0, 0.0); 4];
    let mut g = Complex64::new(bound, 0.0);
    for slot in &mut r {
        g *= seed;
        *slot = g;
    }

    let poly = |x: Complex64| ((x * x + c2) * x + c1) * x + c0;
    for _ in 0..200 {
        let mut max_step = 0.0f64;
        for j in 0..4 {
            let mut denom = Complex64::new(1.0, 0.0);
            for i in 0..4 {
                if i != j {
                    denom *= r[j] - r[i];
                }
            }
            if denom.norm() == 0.0 {
                // Collided estimates: nudge deterministically and continue.
                r[j] += Complex64::new(1e-6 * bound, 1e-6 * bound);
                max_step = f64::INFINITY;
                continue;
            }
            let step = poly(r[j]) / denom;
            r[j] -= step;
            max_step = max_step.max(step.norm());
        }
        let scale = r.iter().map(|x| x.norm()).fold(1.0, f64::max);
        if max_step <= 1e-15 * scale {
            break;
        }
    }

    // Newton polish against the original (non-monic) polynomial until the
    // residual bound holds. The contract asks for at least one polish step.
    let res_bound = 1e-10 * 1.0f64.max(sys.e.norm()).max(sys.b.norm());
    for root in &mut r {
        for _ in 0..8 {
            let d = sys.char_poly_deriv(*root);
            if d.norm() == 0.0 {
                break;
            }
            let f = sys.char_poly(*root);
            *root -= f / d;
            if f.norm() <= 1e-2 * res_bound {
                break;
            }
        }
    }
    if r.iter().any(|&x| sys.char_poly(x).norm() > res_bound) {
        return Err(Error::NonConvergent {
            what: "turning-point residual polish",
            iters: 200,
        });
    }

    // Degeneracy check, relative to the root scale. Two signals are used:
    // the pairwise separation of the computed roots, and the polynomial
    // discriminant Δ = Π(x_i − x_j)² evaluated from the coefficients. The
    // second matters because iterating on a genuinely multiple root leaves
    // estimates a few √ε apart — right at the separation threshold — while
    // the coefficient form of Δ vanishes identically there.
    let scale = r.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let mut min_sep = f64::INFINITY;
    for i in 0..4 {
        for j in (i + 1)..4 {
            min_sep = min_sep.min((r[i] - r[j]).norm());
        }
    }
    let disc = quartic_discriminant(c2, c1, c0);
    let disc_floor = 4e-15 * scale.powi(12);
    if min_sep < DEGENERACY_TOL * scale || disc.norm() < disc_floor {
        return Err(Error::DegenerateRoots { min_sep, scale });
    }

    Ok(TurningPoints {
        roots: canonical_order(r),
    })
}

/// Discriminant of the depressed quartic `x⁴ + p x² + q x + r`.
fn quartic_discriminant(p: Complex64, q: Complex64, r: Complex64) -> Complex64 {
    let (p2, q2, r2) = (p * p, q * q, r * r);
    256.0 * r2 * r - 128.0 * p2 * r2 + 144.0 * p * q2 * r - 27.0 * q2 * q2
        + 16.0 * p2 * p2 * r
        - 4.0 * p2 * p * q2
}

/// Sorts four roots into canonical order: by `arg(x_j − centroid)` ascending
/// in `(−π, π]`, ties (within [`ARG_TIE_TOL`]) by modulus ascending.
fn canonical_order(roots: [Complex64; 4]) -> [Complex64; 4] {
    let centroid = (roots[0] + roots[1] + roots[2] + roots[3]) / 4.0;
    let arg_of = |x: Complex64| -> f64 {
        let d = x - centroid;
        let th = d.im.atan2(d.re);
        // atan2 maps the negative real axis to ±π depending on the sign bit
        // of a (round-off sized) imaginary part; fold the −π side up so the
        // convention is genuinely (−π, π] and jitter-free.
        if th <= -std::f64::consts::PI + ARG_TIE_TOL {
            th + 2.0 * std::f64::consts::PI
        } else {
            th
        }
    };

    let mut keyed: Vec<(f64, f64, Complex64)> = roots
        .iter()
        .map(|&x| (arg_of(x), (x - centroid).norm(), x))
        .collect();
    keyed.sort_by(|l, r| {
        l.0.total_cmp(&r.0)
            .then_with(|| l.1.total_cmp(&r.1))
    });

    // Cluster pass: runs of near-equal argument are re-sorted by modulus so
    // that a pair of roots on a common ray cannot swap places when jitter
    // perturbs their computed arguments in opposite directions.
    let mut start = 0;
    while start < 4 {
        let mut end = start + 1;
        while end < 4 && keyed[end].0 - keyed[end - 1].0 < ARG_TIE_TOL {
            end += 1;
        }
        keyed[start..end].sort_by(|l, r| l.1.total_cmp(&r.1));
        start = end;
    }

    [keyed[0].2, keyed[1].2, keyed[2].2, keyed[3].2]
}

/// Rotates the turning-point labels by `shift` positions:
/// `x_j → x_{(j+shift) mod 4}`.
///
/// The analytic-trajectory and period formulas single out the pairs
/// `(x₀, x₂)` and `(x₁, x₃)`; a solution found under one cyclic labeling
/// stays valid under the others, so searches enumerate all four shifts.
pub fn relabel_cyclic(tp: &TurningPoints, shift: u8) -> TurningPoints {
    debug_assert!(shift < 4, "cyclic shift must be in 0..4");
    let s = (shift % 4) as usize;
    let mut roots = [Complex64::new(0.0, 0.0); 4];
    for (j, slot) in roots.iter_mut().enumerate() {
        *slot = tp.roots[(j + s) % 4];
    }
    TurningPoints { roots }
}
