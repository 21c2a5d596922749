//! Parameter scans that locate periodic orbits.
//!
//! Realness of a period `T(m, n) = (4mK + 2niK′)·e^{−iπ/2}/z` depends on how
//! the four turning points are labeled. Two labelings related by an
//! *even* permutation that preserves the pairing `{x₀, x₂} | {x₁, x₃}`
//! describe the same lattice, but changing the pairing changes κ², z and the
//! lattice itself. There are three pairings, and within each the four cyclic
//! shifts select which pair member plays the role of the starting turning
//! point x₁; together with the pair swap of [`swap_first_pair`] these reach
//! all 24 role assignments of a root quadruple. The energy scan searches the
//! 12 cyclic labelings with both orientations ±n; the θ scan enumerates
//! signed labels directly and searches all 24 assignments, which is what
//! makes every discrete solution reachable from a single root ordering.
//!
//! The search is a bracketed bisection: along the scanned parameter (an
//! energy E, or the phase θ of `b = |b|e^{iθ}`), the function
//! `Im T(m, n) = m·Im P + n·Im Q` with `P = T(1, 0)`, `Q = T(0, 1)` changes
//! sign across a periodic point. P and Q are computed once per grid node
//! and assignment, so adding more (m, n) pairs costs nothing at grid time.
//! Two refinements matter in θ: roots are ordered by continuity along the
//! grid rather than re-canonicalized per node (see [`track_roots`]'s
//! rationale), and a second pass catches zeros that only *touch* zero —
//! tangencies, and crossings that a symmetry folds back — which sign-change
//! bracketing cannot see.

use crate::error::{Error, Result};
use crate::periodicity::{
    context_from_turning_points, first_real_escape, period, PeriodicSolution,
    PeriodicityContext,
};
use crate::quartic::{relabel_cyclic, solve_turning_points, QuarticSystem, TurningPoints};
use num_complex::Complex64;

/// The three turning-point pairings, as permutations applied to the
/// canonical order before any cyclic shift. Pairing 0 keeps
/// `{x₀, x₂} | {x₁, x₃}`; pairing 1 swaps x₁↔x₂ giving `{x₀, x₁} | {x₂, x₃}`;
/// pairing 2 swaps x₂↔x₃ giving `{x₀, x₃} | {x₁, x₂}`.
pub const PAIRINGS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 1, 3, 2]];

/// All (pairing, cyclic shift) labelings searched by the scans.
pub const LABELINGS: [(u8, u8); 12] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 0),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 0),
    (2, 1),
    (2, 2),
    (2, 3),
];

/// Applies labeling (`pairing`, `shift`) to canonically ordered turning
/// points.
pub fn relabel(tp: &TurningPoints, pairing: u8, shift: u8) -> TurningPoints {
    let p = PAIRINGS[pairing as usize];
    let r = tp.roots;
    let permuted = TurningPoints {
        roots: [r[p[0]], r[p[1]], r[p[2]], r[p[3]]],
    };
    relabel_cyclic(&permuted, shift)
}

/// All 24 permutations of four indices, for matching a fresh root set
/// against a reference ordering.
const PERMS4: [[usize; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];

/// Solves the turning points of `sys` and orders them by continuity with a
/// reference ordering: among all 24 assignments the one with the smallest
/// total displacement from `prev` wins.
///
/// The canonical ordering sorts roots by argument, which reshuffles whenever
/// two arguments cross — so along a one-parameter family of systems every
/// canonically-labeled quantity is chopped into segments at those seams.
/// Tracking instead keeps each root's identity from node to node, making
/// labeled quantities (κ², z, the period lattice) smooth functions of the
/// parameter.
fn track_roots(prev: &TurningPoints, sys: &QuarticSystem) -> Result<TurningPoints> {
    let fresh = solve_turning_points(sys)?;
    let mut best = fresh;
    let mut best_cost = f64::INFINITY;
    for p in &PERMS4 {
        let cost: f64 = (0..4)
            .map(|j| (fresh.roots[p[j]] - prev.roots[j]).norm())
            .sum();
        if cost < best_cost {
            best_cost = cost;
            best = TurningPoints {
                roots: [
                    fresh.roots[p[0]],
                    fresh.roots[p[1]],
                    fresh.roots[p[2]],
                    fresh.roots[p[3]],
                ],
            };
        }
    }
    Ok(best)
}

/// Swaps the first two roots of an ordered quadruple. The 12 labelings of
/// [`LABELINGS`] do not form a subgroup of the full permutation group, so
/// applying them to a base ordering reaches only half of the 24 possible
/// role assignments; the other half is the same 12 applied after this swap.
/// The two halves carry genuinely different period-lattice coordinates
/// (swapping a pair maps κ² to a different member of its anharmonic orbit
/// and remixes the (m, n) labels by a unimodular transformation), so a
/// label-bounded search must cover both.
fn swap_first_pair(tp: &TurningPoints) -> TurningPoints {
    let r = tp.roots;
    TurningPoints {
        roots: [r[1], r[0], r[2], r[3]],
    }
}

/// `Im P` and `Im Q` for all 24 role assignments of one (already ordered)
/// root quadruple: entries 0–11 are the [`LABELINGS`] of the quadruple,
/// entries 12–23 the same labelings of the pair-swapped quadruple.
fn labeling_table(a: f64, tp: &TurningPoints) -> [Option<[f64; 2]>; 24] {
    let mut table = [None; 24];
    let swapped = swap_first_pair(tp);
    for flip in 0..2 {
        let base = if flip == 0 { tp } else { &swapped };
        for (idx, &(pairing, shift)) in LABELINGS.iter().enumerate() {
            if let Ok(ctx) = context_from_turning_points(a, relabel(base, pairing, shift)) {
                let p = period(&ctx, 1, 0);
                let q = period(&ctx, 0, 1);
                if p.im.is_finite() && q.im.is_finite() {
                    table[12 * flip + idx] = Some([p.im, q.im]);
                }
            }
        }
    }
    table
}

/// What the scan varies: the phase of b at fixed energy, or the energy at
/// fixed b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanMode {
    /// Scan θ ∈ (0, 2π) with `b = b_abs·e^{iθ}` at the given real energy.
    Theta { b_abs: f64, energy: f64 },
    /// Scan a real energy window at fixed complex b.
    Energy { b: Complex64 },
}

/// Configuration shared by the scans.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    /// Quartic coefficient (real, nonzero).
    pub a: f64,
    /// Perturbation exponent, 1 or 2.
    pub k: u8,
    pub mode: ScanMode,
    /// Largest |m|, |n| enumerated by the θ scan.
    pub mn_max: i64,
    /// Grid nodes used for bracketing, ≥ 100.
    pub grid_points: usize,
    /// Bisection width at which a bracket is considered refined, ≤ 1e-8.
    pub refine_tol: f64,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.a == 0.0 || !self.a.is_finite() {
            return Err(Error::InvalidInput(format!(
                "scan coefficient a must be finite and nonzero, got {}",
                self.a
            )));
        }
        if self.k != 1 && self.k != 2 {
            return Err(Error::InvalidInput(format!(
                "scan exponent k must be 1 or 2, got {}",
                self.k
            )));
        }
        if self.mn_max < 1 {
            return Err(Error::InvalidInput(format!(
                "mn_max must be ≥ 1, got {}",
                self.mn_max
            )));
        }
        if self.grid_points < 100 {
            return Err(Error::InvalidInput(format!(
                "grid_points must be ≥ 100, got {}",
                self.grid_points
            )));
        }
        if !(self.refine_tol > 0.0) || self.refine_tol > 1e-8 {
            return Err(Error::InvalidInput(format!(
                "refine_tol must lie in (0, 1e-8], got {}",
                self.refine_tol
            )));
        }
        match self.mode {
            ScanMode::Theta { b_abs, energy } => {
                if !(b_abs > 0.0) || !b_abs.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "θ scan needs |b| > 0, got {b_abs}"
                    )));
                }
                if !energy.is_finite() {
                    return Err(Error::InvalidInput("θ scan energy must be finite".into()));
                }
            }
            ScanMode::Energy { b } => {
                if !b.re.is_finite() || !b.im.is_finite() {
                    return Err(Error::InvalidInput("scan coefficient b must be finite".into()));
                }
            }
        }
        Ok(())
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Sign-normalizes a lattice label to m > 0, or (0, n > 0): (m, n) and
/// (−m, −n) describe the same orbit traversed in opposite directions.
fn normalize_label(m: i64, n: i64) -> (i64, i64) {
    if m < 0 || (m == 0 && n < 0) {
        (-m, -n)
    } else {
        (m, n)
    }
}

/// Builds the periodicity context of one labeling at explicit parameters.
fn labeled_context(
    a: f64,
    b: Complex64,
    k: u8,
    e: Complex64,
    pairing: u8,
    shift: u8,
) -> Result<PeriodicityContext> {
    let sys = QuarticSystem::new(a, b, k, e)?;
    let tp = solve_turning_points(&sys)?;
    context_from_turning_points(a, relabel(&tp, pairing, shift))
}

/// `Im P` and `Im Q` for all 12 labelings at one parameter node, or None for
/// labelings where the node is degenerate.
fn node_table(a: f64, b: Complex64, k: u8, e: Complex64) -> Option<[Option<[f64; 2]>; 12]> {
    let sys = QuarticSystem::new(a, b, k, e).ok()?;
    let tp = solve_turning_points(&sys).ok()?;
    let mut table = [None; 12];
    for (idx, &(pairing, shift)) in LABELINGS.iter().enumerate() {
        if let Ok(ctx) = context_from_turning_points(a, relabel(&tp, pairing, shift)) {
            let p = period(&ctx, 1, 0);
            let q = period(&ctx, 0, 1);
            if p.im.is_finite() && q.im.is_finite() {
                table[idx] = Some([p.im, q.im]);
            }
        }
    }
    Some(table)
}

/// A candidate accepted by [`validate_solution`].
struct Validated {
    t_p: f64,
    residual: f64,
}

/// Re-derives the period at a refined parameter and applies the acceptance
/// checks: the period must be real to 1e-8 relative with a nonzero real
/// part, and the orbit must not hit a trajectory pole at a real time before
/// one full period (an orbit that escapes first is not periodic no matter
/// what the lattice says).
fn validate_solution(ctx: &PeriodicityContext, m: i64, n: i64) -> Option<Validated> {
    let t = period(ctx, m, n);
    let t_p = t.re.abs();
    if !(t_p > 1e-12) || !t.im.is_finite() || t.im.abs() > 1e-8 * t_p {
        return None;
    }
    match first_real_escape(ctx, t_p * (1.0 - 1e-6)) {
        Ok(Some(_)) => None,
        // An inconclusive escape analysis must not drop a solution whose
        // period already validated; escapes are re-screened by the ODE
        // cross-checks downstream.
        _ => Some(Validated {
            t_p,
            residual: t.im.abs(),
        }),
    }
}

/// Bisects `f` on a sign-changing bracket until its width is below
/// `0.5·tol`, so independent runs from different grids land within `tol` of
/// each other. Returns None when an evaluation inside the bracket fails.
fn bisect(
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    f: &mut impl FnMut(f64) -> Option<f64>,
    tol: f64,
) -> Option<f64> {
    for _ in 0..200 {
        if hi - lo <= 0.5 * tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if !f_mid.is_finite() {
            return None;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Golden-section minimization of `|f|` on `(lo, hi)`, shrinking the
/// interval to below `0.5·tol`. Used for zeros that the canonical labeling
/// folds into a V-shaped touch of zero (the labeling reorders by argument,
/// so a branch crossing at a symmetric parameter value reflects instead of
/// changing sign), which sign-change bracketing cannot see. Returns None
/// when an evaluation fails.
fn golden_min_abs(
    mut lo: f64,
    mut hi: f64,
    f: &mut impl FnMut(f64) -> Option<f64>,
    tol: f64,
) -> Option<f64> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?.abs();
    let mut f2 = f(x2)?.abs();
    for _ in 0..200 {
        if hi - lo <= 0.5 * tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?.abs();
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?.abs();
        }
    }
    Some(if f1 <= f2 { x1 } else { x2 })
}

/// Candidate solution rows prior to deduplication.
struct Candidate {
    param: f64,
    m: i64,
    n: i64,
    t_p: f64,
    residual: f64,
    pairing: u8,
    shift: u8,
}

/// Merges candidates that located the same parameter (within `tol`) through
/// different labelings, keeping the one with the smallest period and, among
/// those, the lowest labeling index — a deterministic choice.
fn dedupe(mut cands: Vec<Candidate>, tol: f64) -> Vec<Candidate> {
    cands.sort_by(|a, b| {
        a.param
            .total_cmp(&b.param)
            .then(a.t_p.total_cmp(&b.t_p))
            .then(a.pairing.cmp(&b.pairing))
            .then(a.shift.cmp(&b.shift))
    });
    let mut out: Vec<Candidate> = Vec::new();
    for c in cands {
        match out.last() {
            Some(last) if (c.param - last.param).abs() <= tol => {
                // Same located parameter: the sort already placed the
                // preferred representative first.
            }
            _ => out.push(c),
        }
    }
    out
}

/// Locates energies in `e_range` at which the (m, n) orbit of
/// `H = p² + a x⁴ + b xᵏ` is periodic.
///
/// The scan brackets zeros of `Im T(m, n)` on a uniform grid over the energy
/// window for every labeling and both orientations ±n, bisects each bracket
/// to `refine_tol`, validates the refined point (realness of the period and
/// absence of an earlier real escape), and deduplicates. Grid nodes with
/// degenerate turning points are excluded from bracketing. The config must
/// be in [`ScanMode::Energy`].
///
/// Returned solutions are sorted by energy; their (m, n) is the requested
/// label up to the orientation that was realized (the sign of n flips when
/// the real period lies along the conjugate lattice direction).
pub fn discretize_energy(
    cfg: &ScanConfig,
    m: i64,
    n: i64,
    e_range: (f64, f64),
) -> Result<Vec<PeriodicSolution>> {
    cfg.validate()?;
    let b = match cfg.mode {
        ScanMode::Energy { b } => b,
        ScanMode::Theta { .. } => {
            return Err(Error::InvalidInput(
                "discretize_energy needs an Energy scan mode".into(),
            ))
        }
    };
    if (m, n) == (0, 0) {
        return Err(Error::InvalidInput(
            "(m, n) = (0, 0) does not label an orbit".into(),
        ));
    }
    let (e0, e1) = e_range;
    if !(e0 < e1) || !e0.is_finite() || !e1.is_finite() {
        return Err(Error::InvalidInput(format!(
            "energy window must satisfy e_min < e_max, got ({e0}, {e1})"
        )));
    }
    // The located energies are identical for (m, n) and (−m, −n); reduce to
    // the normalized representative so both calls return the same rows.
    let g = gcd(m, n);
    let (m, n) = normalize_label(m / g, n / g);

    let grid = cfg.grid_points;
    let nodes: Vec<f64> = (0..grid)
        .map(|i| e0 + (e1 - e0) * i as f64 / (grid - 1) as f64)
        .collect();
    let tables: Vec<Option<[Option<[f64; 2]>; 12]>> = nodes
        .iter()
        .map(|&e| node_table(cfg.a, b, cfg.k, Complex64::new(e, 0.0)))
        .collect();

    let mut cands = Vec::new();
    for (idx, &(pairing, shift)) in LABELINGS.iter().enumerate() {
        for n_signed in signed_orientations(m, n) {
            let g_at = |tab: &Option<[Option<[f64; 2]>; 12]>| -> Option<f64> {
                let [im_p, im_q] = (*tab)?[idx]?;
                let v = m as f64 * im_p + n_signed as f64 * im_q;
                v.is_finite().then_some(v)
            };
            for i in 0..grid - 1 {
                let (Some(ga), Some(gb)) = (g_at(&tables[i]), g_at(&tables[i + 1])) else {
                    continue;
                };
                if !(ga * gb < 0.0) {
                    continue;
                }
                let mut eval = |e: f64| -> Option<f64> {
                    labeled_context(cfg.a, b, cfg.k, Complex64::new(e, 0.0), pairing, shift)
                        .ok()
                        .map(|ctx| period(&ctx, m, n_signed).im)
                };
                let Some(e_star) = bisect(nodes[i], nodes[i + 1], ga, &mut eval, cfg.refine_tol)
                else {
                    continue;
                };
                let Ok(ctx) = labeled_context(
                    cfg.a,
                    b,
                    cfg.k,
                    Complex64::new(e_star, 0.0),
                    pairing,
                    shift,
                ) else {
                    continue;
                };
                if let Some(v) = validate_solution(&ctx, m, n_signed) {
                    cands.push(Candidate {
                        param: e_star,
                        m,
                        n: n_signed,
                        t_p: v.t_p,
                        residual: v.residual,
                        pairing,
                        shift,
                    });
                }
            }
        }
    }

    let e_scale = 1.0f64.max(e0.abs()).max(e1.abs());
    let deduped = dedupe(cands, (4.0 * cfg.refine_tol).max(1e-12 * e_scale));
    Ok(deduped
        .into_iter()
        .map(|c| PeriodicSolution {
            m: c.m,
            n: c.n,
            located_parameter: c.param,
            t_p: c.t_p,
            residual: c.residual,
            relabeling: c.shift,
            pairing: c.pairing,
        })
        .collect())
}

/// The lattice orientations to try for a label: both ±n, except when n = 0.
fn signed_orientations(_m: i64, n: i64) -> Vec<i64> {
    if n == 0 {
        vec![0]
    } else {
        vec![n, -n]
    }
}

/// Scans the phase θ of `b = |b|·e^{iθ}` around the full circle [0, 2π) at
/// fixed energy, locating for every coprime label (m, n) with |m|, |n| ≤
/// `mn_max` the phases where that orbit is periodic (the seam θ ≡ 0 is
/// covered by a wrapped bracket). `located_parameter` of the returned
/// solutions is θ; the ratio r = n/m follows from the label.
///
/// Labels are enumerated with m ≥ 1 and signed n (plus (1, 0)); the m = 0
/// family lies at the window endpoints for this parameterization and is
/// covered by the pure-quartic catalog instead. Points are sorted by θ,
/// then (m, n).
pub fn scan_theta(cfg: &ScanConfig) -> Result<Vec<PeriodicSolution>> {
    cfg.validate()?;
    let (b_abs, energy) = match cfg.mode {
        ScanMode::Theta { b_abs, energy } => (b_abs, energy),
        ScanMode::Energy { .. } => {
            return Err(Error::InvalidInput(
                "scan_theta needs a Theta scan mode".into(),
            ))
        }
    };
    let e = Complex64::new(energy, 0.0);
    let b_of = |theta: f64| Complex64::from_polar(b_abs, theta);

    let grid = cfg.grid_points;
    let tau = 2.0 * std::f64::consts::PI;
    let mut nodes: Vec<f64> =
        (0..grid).map(|i| tau * (i as f64 + 0.5) / grid as f64).collect();

    // Order the roots by continuity along the θ grid (see track_roots): a
    // canonical per-node ordering would chop every Im T curve into segments
    // at the argument-sort seams, hiding the zeros that sit between them.
    //
    // The domain is a circle, so two wrap nodes at θ + 2π are appended and
    // tracked from the end of the chain (the tracked ordering can return
    // with a nontrivial permutation after a full turn, so the wrap tables
    // must continue the chain rather than reuse the ones at θ itself).
    // Zeros at the seam θ ≡ 0 are then bracketed like any others.
    nodes.push(nodes[0] + tau);
    nodes.push(nodes[1] + tau);
    let mut tracked: Vec<Option<TurningPoints>> = Vec::with_capacity(grid + 2);
    let mut prev: Option<TurningPoints> = None;
    for &th in &nodes {
        let cur = QuarticSystem::new(cfg.a, b_of(th), cfg.k, e)
            .ok()
            .and_then(|sys| match &prev {
                Some(p) => track_roots(p, &sys).ok(),
                None => solve_turning_points(&sys).ok(),
            });
        if cur.is_some() {
            prev = cur;
        }
        tracked.push(cur);
    }
    let tables: Vec<Option<[Option<[f64; 2]>; 24]>> = tracked
        .iter()
        .map(|opt| opt.as_ref().map(|tp| labeling_table(cfg.a, tp)))
        .collect();

    let mut labels = Vec::new();
    for m in 1..=cfg.mn_max {
        for n in -cfg.mn_max..=cfg.mn_max {
            if gcd(m, n) == 1 {
                labels.push((m, n));
            }
        }
    }

    let mut points = Vec::new();
    for &(m, n) in &labels {
        let mut cands = Vec::new();
        for slot in 0..24usize {
            let (flip, idx) = (slot / 12, slot % 12);
            let (pairing, shift) = LABELINGS[idx];
            let g_at = |tab: &Option<[Option<[f64; 2]>; 24]>| -> Option<f64> {
                let [im_p, im_q] = (*tab)?[slot]?;
                let v = m as f64 * im_p + n as f64 * im_q;
                v.is_finite().then_some(v)
            };
            // Evaluations inside a bracket re-track from the nearest grid
            // node, so refinement stays on the same root branch the bracket
            // was found on.
            let ctx_at = |th: f64, base: &TurningPoints| -> Option<PeriodicityContext> {
                let sys = QuarticSystem::new(cfg.a, b_of(th), cfg.k, e).ok()?;
                let tp = track_roots(base, &sys).ok()?;
                let oriented = if flip == 0 { tp } else { swap_first_pair(&tp) };
                context_from_turning_points(cfg.a, relabel(&oriented, pairing, shift)).ok()
            };
            let accept =
                |th_star: f64, base: &TurningPoints, cands: &mut Vec<Candidate>| {
                    let Some(ctx) = ctx_at(th_star, base) else {
                        return;
                    };
                    if let Some(v) = validate_solution(&ctx, m, n) {
                        cands.push(Candidate {
                            param: th_star.rem_euclid(tau),
                            m,
                            n,
                            t_p: v.t_p,
                            residual: v.residual,
                            pairing: pairing + 3 * flip as u8,
                            shift,
                        });
                    }
                };
            // Pass 1: zeros that change sign between adjacent nodes. The
            // final bracket wraps across the seam via the first extra node.
            for i in 0..grid {
                let (Some(ga), Some(gb)) = (g_at(&tables[i]), g_at(&tables[i + 1])) else {
                    continue;
                };
                if !(ga * gb < 0.0) {
                    continue;
                }
                let Some(base) = &tracked[i] else { continue };
                let mut eval =
                    |th: f64| -> Option<f64> { ctx_at(th, base).map(|c| period(&c, m, n).im) };
                if let Some(th_star) =
                    bisect(nodes[i], nodes[i + 1], ga, &mut eval, cfg.refine_tol)
                {
                    accept(th_star, base, &mut cands);
                }
            }
            // Pass 2: zeros where the curve touches zero without changing
            // sign (a tangency, or a fold at a symmetric parameter value).
            // These show up as a local minimum of |g| whose depth is
            // comparable to the one-node variation of g: a smooth positive
            // minimum sits far above it, so minima that cannot reach zero
            // are filtered before spending any refinement on them. Centers
            // run through the first wrap node so a touch at the seam is
            // seen; its interval is clamped to one turn to keep every
            // reported phase single-valued modulo 2π.
            for i in 1..=grid {
                let (Some(gl), Some(gc), Some(gr)) = (
                    g_at(&tables[i - 1]),
                    g_at(&tables[i]),
                    g_at(&tables[i + 1]),
                ) else {
                    continue;
                };
                if gl * gc < 0.0 || gc * gr < 0.0 {
                    continue; // pass 1 already owns this interval
                }
                let (al, ac, ar) = (gl.abs(), gc.abs(), gr.abs());
                if !(ac < al && ac <= ar) || ac > (al - ac).max(ar - ac) {
                    continue;
                }
                let Some(base) = &tracked[i] else { continue };
                let mut eval =
                    |th: f64| -> Option<f64> { ctx_at(th, base).map(|c| period(&c, m, n).im) };
                let hi = nodes[i + 1].min(nodes[grid]);
                if let Some(th_star) =
                    golden_min_abs(nodes[i - 1], hi, &mut eval, cfg.refine_tol)
                {
                    accept(th_star, base, &mut cands);
                }
            }
        }
        let tol = (4.0 * cfg.refine_tol).max(1e-12);
        for c in dedupe(cands, tol) {
            points.push(PeriodicSolution {
                m: c.m,
                n: c.n,
                located_parameter: c.param,
                t_p: c.t_p,
                residual: c.residual,
                relabeling: c.shift,
                pairing: c.pairing,
            });
        }
    }
    points.sort_by(|a, b| {
        a.located_parameter
            .total_cmp(&b.located_parameter)
            .then(a.m.cmp(&b.m))
            .then(a.n.cmp(&b.n))
    });
    Ok(points)
}

/// One row of a duality comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityRow {
    /// Energy of the original solution.
    pub e: f64,
    /// Nearest periodic energy of the dual system inside a window around −E,
    /// when one was located.
    pub dual_e: Option<f64>,
    /// Whether |dual_e + e| ≤ 1e-4.
    pub matched: bool,
}

/// Checks the anti-linear duality of the k = 1 family: the map
/// `(a, b, E) → (−a, i·conj(b), −E)` sends periodic orbits to periodic
/// orbits with the same label. For each input solution the dual system is
/// scanned in a small window around −E with the same (m, n).
pub fn duality_check(
    b: Complex64,
    a: f64,
    solutions: &[PeriodicSolution],
) -> Result<Vec<DualityRow>> {
    let dual_a = -a;
    let dual_b = Complex64::new(b.im, b.re); // i·conj(b)
    let mut rows = Vec::with_capacity(solutions.len());
    for s in solutions {
        let e = s.located_parameter;
        let cfg = ScanConfig {
            a: dual_a,
            k: 1,
            mode: ScanMode::Energy { b: dual_b },
            mn_max: s.m.abs().max(s.n.abs()).max(1),
            grid_points: 200,
            refine_tol: 1e-10,
        };
        let window = (-e - 0.01, -e + 0.01);
        let dual_sols = discretize_energy(&cfg, s.m, s.n, window)?;
        let dual_e = dual_sols
            .iter()
            .map(|d| d.located_parameter)
            .min_by(|x, y| (x + e).abs().total_cmp(&(y + e).abs()));
        let matched = dual_e.is_some_and(|de| (de + e).abs() <= 1e-4);
        rows.push(DualityRow { e, dual_e, matched });
    }
    Ok(rows)
}

/// Which degenerate limit of the pure-quartic family a catalog entry sits
/// on, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointFamily {
    /// A genuinely complex Hamiltonian (the generic case).
    Generic,
    /// n = 0: θ = 0, the Hermitian quartic `p² + μ_r x⁴`.
    Hermitian,
    /// m = 0: θ = π, the inverted quartic `p² − μ_r x⁴`.
    WrongSign,
}

/// One member of the pure-quartic catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogEntry {
    pub m: i64,
    pub n: i64,
    /// Quantized phase θ = 4·arctan[n/(2m+n)] of `H = p² + μ_r e^{iθ} x⁴`.
    pub theta: f64,
    pub family: EndpointFamily,
}

/// Enumerates the phases at which the pure quartic `H = p² + μ_r e^{iθ} x⁴`
/// has a periodic orbit, for all coprime labels with |m|, |n| ≤ `mn_max`
/// (m ≥ 1 with signed n, plus the inverted-quartic label (0, 1)).
///
/// The phases are pairwise distinct — θ is a Möbius function of n/m — and
/// the catalog is sorted by θ.
pub fn pure_quartic_catalog(mn_max: i64) -> Result<Vec<CatalogEntry>> {
    if mn_max < 1 {
        return Err(Error::InvalidInput(format!(
            "mn_max must be ≥ 1, got {mn_max}"
        )));
    }
    let mut entries = vec![CatalogEntry {
        m: 0,
        n: 1,
        theta: crate::periodicity::pure_quartic_angle(0, 1),
        family: EndpointFamily::WrongSign,
    }];
    for m in 1..=mn_max {
        for n in -mn_max..=mn_max {
            if gcd(m, n) != 1 {
                continue;
            }
            let family = if n == 0 {
                EndpointFamily::Hermitian
            } else {
                EndpointFamily::Generic
            };
            entries.push(CatalogEntry {
                m,
                n,
                theta: crate::periodicity::pure_quartic_angle(m, n),
                family,
            });
        }
    }
    entries.sort_by(|a, b| a.theta.total_cmp(&b.theta).then(a.m.cmp(&b.m)));
    Ok(entries)
}
