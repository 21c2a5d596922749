//! Complex classical mechanics of quartic Hamiltonians.
//!
//! This crate computes classical trajectories of one-dimensional Hamiltonians
//!
//! ```text
//!     H = p² + a x⁴ + b xᵏ      (a real, b complex, k ∈ {1, 2})
//! ```
//!
//! continued into the complex-x plane, where the generic orbit is an open
//! curve that escapes to infinity in finite time. For special, discrete
//! parameter values the orbit closes: the complex period
//! `T = (4mK + 2niK′)·e^{−iπ/2}/z` becomes real for a pair of integers
//! `(m, n)`, and the motion is periodic. The crate locates those discrete
//! parameter values (phases of `b`, or energies), evaluates the orbits both
//! in closed form (Jacobi elliptic functions) and by direct integration of
//! Hamilton's equations, and checks the two against each other.
//!
//! Module layout mirrors the computation pipeline:
//!
//! * [`quartic`] — turning points (roots of `E − V(x)`) with a deterministic
//!   canonical labeling,
//! * [`elliptic`] — Carlson symmetric integrals, complete/incomplete
//!   integrals of the first kind, and Jacobi `sn`, `cn`, `dn` for complex
//!   modulus,
//! * [`periodicity`] — the period lattice, escape time, rationality ratio,
//!   and the closed-form pure-quartic (`H = p² + μx⁴`) period formulas,
//! * [`trajectory`] — the analytic orbit, an adaptive Runge–Kutta
//!   integrator, and phase-space closure detection,
//! * [`scan`] — parameter-space searches: phase scans, energy
//!   discretization, the energy-duality check, and the pure-quartic catalog.
//!
//! All operations are pure functions of their inputs and are safe to call
//! concurrently. Identical inputs produce bitwise-identical results.

// Guards written as `!(x > 0.0)` are deliberate: they reject NaN along with
// the out-of-range values, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod elliptic;
pub mod error;
pub mod periodicity;
pub mod quartic;
pub mod scan;
pub mod trajectory;

pub use error::{Error, Result};

/// Crate version, re-exported for run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
