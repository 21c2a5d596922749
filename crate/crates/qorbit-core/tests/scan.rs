// Reference constants below are written with full source precision so the
// nearest-double rounding is explicit.
#![allow(clippy::excessive_precision)]

mod common;

use num_complex::Complex64;
use qorbit_core::periodicity::{context_from_turning_points, period, PeriodicSolution};
use qorbit_core::quartic::{relabel_cyclic, solve_turning_points, QuarticSystem, TurningPoints};
use qorbit_core::scan::{
    discretize_energy, duality_check, pure_quartic_catalog, scan_theta, EndpointFamily,
    ScanConfig, ScanMode,
};
use qorbit_core::trajectory::{detect_closure, ode_trajectory};
use qorbit_core::Error;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Distance between two phases on the circle of circumference 2π.
fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn energy_cfg(k: u8, b: Complex64) -> ScanConfig {
    ScanConfig {
        a: 1.0,
        k,
        mode: ScanMode::Energy { b },
        mn_max: 5,
        grid_points: 200,
        refine_tol: 1e-10,
    }
}

fn theta_cfg(k: u8, b_abs: f64, grid: usize) -> ScanConfig {
    ScanConfig {
        a: 1.0,
        k,
        mode: ScanMode::Theta { b_abs, energy: 1.0 },
        mn_max: 3,
        grid_points: grid,
        refine_tol: 1e-10,
    }
}

/// ODE cross-check of a θ-scan row: the orbit from some canonical turning
/// point must close in phase space after the reported period.
fn closes_physically(row: &PeriodicSolution, b_abs: f64, k: u8) -> bool {
    let b = Complex64::from_polar(b_abs, row.located_parameter);
    let sys = QuarticSystem::new(1.0, b, k, c(1.0, 0.0)).unwrap();
    let tp = solve_turning_points(&sys).unwrap();
    for start in tp.roots {
        let Ok(traj) = ode_trajectory(&sys, start, c(0.0, 0.0), 1.2 * row.t_p, row.t_p / 512.0)
        else {
            continue;
        };
        if let Ok(chk) = detect_closure(&traj, row.t_p) {
            if chk.closed {
                return true;
            }
        }
    }
    false
}

#[test]
fn energy_scan_locates_known_levels() {
    // Three windows with one known discrete level each.
    let rows = discretize_energy(&energy_cfg(1, c(1.0, 1.0)), 1, 1, (-1.0, 1.0)).unwrap();
    assert!(
        rows.iter()
            .any(|r| (r.located_parameter - 0.27499).abs() <= 5e-4),
        "missing the (1,1) level: {rows:?}"
    );
    let rows = discretize_energy(&energy_cfg(2, c(1.0, 1.0)), 3, 1, (0.0, 4.0)).unwrap();
    assert!(rows
        .iter()
        .any(|r| (r.located_parameter - 2.99725).abs() <= 5e-4));
    let rows = discretize_energy(&energy_cfg(1, c(1.0, 1.0)), 2, 1, (-1.0, 0.0)).unwrap();
    assert!(rows
        .iter()
        .any(|r| (r.located_parameter + 0.28103).abs() <= 5e-4));
}

#[test]
fn energy_scan_is_orientation_blind() {
    // (m, n) and (−m, −n) label the same orbit traversed backwards.
    let fwd = discretize_energy(&energy_cfg(1, c(1.0, 1.0)), 1, 2, (0.0, 1.0)).unwrap();
    let rev = discretize_energy(&energy_cfg(1, c(1.0, 1.0)), -1, -2, (0.0, 1.0)).unwrap();
    assert_eq!(fwd.len(), rev.len());
    for (f, r) in fwd.iter().zip(&rev) {
        assert_eq!(f.located_parameter.to_bits(), r.located_parameter.to_bits());
        assert_eq!((f.m, f.n), (r.m, r.n));
    }
    assert!(!fwd.is_empty());
}

#[test]
fn empty_window_yields_no_solutions() {
    let rows = discretize_energy(&energy_cfg(1, c(1.0, 1.0)), 1, 1, (10.0, 11.0)).unwrap();
    assert!(rows.is_empty());
}

#[test]
fn configs_are_validated() {
    let mut cfg = theta_cfg(1, 1.0, 600);
    cfg.grid_points = 50;
    assert!(matches!(scan_theta(&cfg), Err(Error::InvalidInput(_))));
    let mut cfg = theta_cfg(1, 1.0, 600);
    cfg.refine_tol = 1e-6;
    assert!(matches!(scan_theta(&cfg), Err(Error::InvalidInput(_))));
    let mut cfg = theta_cfg(1, 1.0, 600);
    cfg.mn_max = 0;
    assert!(matches!(scan_theta(&cfg), Err(Error::InvalidInput(_))));
    let mut cfg = theta_cfg(3, 1.0, 600);
    cfg.k = 3;
    assert!(matches!(scan_theta(&cfg), Err(Error::InvalidInput(_))));
    let cfg = theta_cfg(1, 0.0, 600);
    assert!(matches!(scan_theta(&cfg), Err(Error::InvalidInput(_))));
    // Mode mismatches.
    assert!(matches!(
        scan_theta(&energy_cfg(1, c(1.0, 1.0))),
        Err(Error::InvalidInput(_))
    ));
    assert!(matches!(
        discretize_energy(&theta_cfg(1, 1.0, 600), 1, 1, (0.0, 1.0)),
        Err(Error::InvalidInput(_))
    ));
    assert!(matches!(
        discretize_energy(&energy_cfg(1, c(1.0, 1.0)), 0, 0, (0.0, 1.0)),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn theta_scan_solutions_verify_and_sort() {
    let rows = scan_theta(&theta_cfg(1, 2.0, 600)).unwrap();
    assert!(rows.len() >= 20, "only {} rows", rows.len());
    for w in rows.windows(2) {
        assert!(w[0].located_parameter <= w[1].located_parameter, "unsorted");
    }
    for r in &rows {
        assert!(r.located_parameter >= 0.0 && r.located_parameter < 2.0 * PI);
        assert!(r.m >= 1 && r.m <= 3 && r.n.abs() <= 3);
        // Refined points carry a real period: |Im T| ≤ 1e-8·T.
        assert!(r.residual <= 1e-8 * r.t_p, "residual {} at θ {}", r.residual, r.located_parameter);
        assert!(r.t_p > 0.0);
    }
}

#[test]
fn theta_scan_rows_close_physically() {
    // Spot-check integrated closure across the catalog (every 6th row keeps
    // the test quick; the full sweep runs in the acceptance suite).
    let rows = scan_theta(&theta_cfg(2, 2.0, 600)).unwrap();
    assert!(rows.len() >= 20);
    for row in rows.iter().step_by(6) {
        assert!(
            closes_physically(row, 2.0, 2),
            "row at θ = {} (m,n) = ({},{}) does not close",
            row.located_parameter,
            row.m,
            row.n
        );
    }
}

#[test]
fn theta_scan_is_grid_robust() {
    // Doubling the grid may add brackets but must not move refined points.
    let coarse = scan_theta(&theta_cfg(1, 2.0, 400)).unwrap();
    let fine = scan_theta(&theta_cfg(1, 2.0, 800)).unwrap();
    assert!(!coarse.is_empty());
    for row in &coarse {
        let moved = fine
            .iter()
            .filter(|f| (f.m, f.n) == (row.m, row.n))
            .map(|f| circ_dist(f.located_parameter, row.located_parameter))
            .fold(f64::INFINITY, f64::min);
        assert!(
            moved <= 1e-9,
            "({},{}) at θ = {} moved by {moved:.3e}",
            row.m,
            row.n,
            row.located_parameter
        );
    }
}

#[test]
fn theta_scan_is_deterministic() {
    let a = scan_theta(&theta_cfg(2, 2.0, 400)).unwrap();
    let b = scan_theta(&theta_cfg(2, 2.0, 400)).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.located_parameter.to_bits(), y.located_parameter.to_bits());
        assert_eq!(x.t_p.to_bits(), y.t_p.to_bits());
        assert_eq!((x.m, x.n, x.pairing, x.relabeling), (y.m, y.n, y.pairing, y.relabeling));
    }
}

#[test]
fn theta_scan_respects_the_parity_symmetry() {
    // For a linear perturbation, x → −x maps b to −b: the solution set is
    // invariant under θ → θ + π with the same labels.
    let rows = scan_theta(&theta_cfg(1, 2.0, 600)).unwrap();
    for r in &rows {
        let partner = r.located_parameter + PI;
        let found = rows.iter().any(|s| {
            (s.m, s.n) == (r.m, r.n) && circ_dist(s.located_parameter, partner) < 1e-6
        });
        assert!(
            found,
            "no θ + π partner for ({},{}) at {}",
            r.m, r.n, r.located_parameter
        );
    }
}

#[test]
fn theta_scan_respects_the_conjugation_symmetry() {
    // Conjugating the Hamiltonian maps θ → 2π − θ and flips the lattice
    // orientation: (θ, m, n) pairs with (2π − θ, m, −n).
    for k in [1u8, 2] {
        let rows = scan_theta(&theta_cfg(k, 2.0, 600)).unwrap();
        for r in &rows {
            let partner = 2.0 * PI - r.located_parameter;
            let found = rows.iter().any(|s| {
                (s.m, s.n) == (r.m, -r.n) && circ_dist(s.located_parameter, partner) < 1e-6
            });
            assert!(
                found,
                "k={k}: no reflection partner for ({},{}) at {}",
                r.m, r.n, r.located_parameter
            );
        }
    }
}

#[test]
fn symmetric_phases_dominate_at_unit_strength() {
    // At |b| = 1 and unit energy the discrete set collapses onto the
    // symmetric phases: 0, π (real Hamiltonians) and π/2, 3π/2
    // (conjugation-symmetric), where whole families close at once.
    let rows = scan_theta(&theta_cfg(1, 1.0, 600)).unwrap();
    assert!(rows.len() >= 8, "only {} rows", rows.len());
    for r in &rows {
        let th = r.located_parameter;
        let near_symmetric = [0.0, 0.5 * PI, PI, 1.5 * PI]
            .iter()
            .any(|&s| circ_dist(th, s) < 1e-3);
        assert!(near_symmetric, "unexpected solution at θ = {th}");
    }
    // The real Hamiltonian at θ = π carries the n = 0 orbit.
    assert!(rows
        .iter()
        .any(|r| (r.m, r.n) == (1, 0) && (r.located_parameter - PI).abs() < 1e-6));
}

#[test]
fn positive_ratio_band_rises_with_theta() {
    // Scatter structure strictly inside the first quarter-turn: at each
    // solved phase the smallest positive ratio n/m is nondecreasing in θ.
    // The Hermitian phase θ = 0 hosts a symmetric family that sits outside
    // the rising band, so the seam is excluded.
    let rows = scan_theta(&theta_cfg(1, 2.0, 600)).unwrap();
    let mut band: Vec<(f64, f64)> = Vec::new(); // (θ, min positive r)
    for r in rows
        .iter()
        .filter(|r| r.located_parameter > 1e-3 && r.located_parameter < 1.0 && r.n > 0)
    {
        let ratio = r.n as f64 / r.m as f64;
        match band.last_mut() {
            Some((th, best)) if (*th - r.located_parameter).abs() < 1e-9 => {
                *best = best.min(ratio);
            }
            _ => band.push((r.located_parameter, ratio)),
        }
    }
    assert!(band.len() >= 4, "band too sparse: {band:?}");
    for w in band.windows(2) {
        assert!(
            w[1].1 >= w[0].1 - 1e-12,
            "band not monotone: {:?} then {:?}",
            w[0],
            w[1]
        );
    }
}

#[test]
fn located_phases_are_labeling_independent() {
    // The located set must not depend on how the initial quadruple was
    // labeled: from any cyclic rotation of the canonical roots, some role
    // assignment reproduces a real period at the located phase.
    let rows = scan_theta(&theta_cfg(2, 2.0, 400)).unwrap();
    const PERMS: [[usize; 4]; 24] = [
        [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1],
        [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0], [1, 3, 0, 2], [1, 3, 2, 0],
        [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3], [2, 1, 3, 0], [2, 3, 0, 1], [2, 3, 1, 0],
        [3, 0, 1, 2], [3, 0, 2, 1], [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
    ];
    for row in rows.iter().step_by(7) {
        let b = Complex64::from_polar(2.0, row.located_parameter);
        let sys = QuarticSystem::new(1.0, b, 2, c(1.0, 0.0)).unwrap();
        let tp = solve_turning_points(&sys).unwrap();
        for s in 0..4u8 {
            let rotated = relabel_cyclic(&tp, s);
            let mut best = f64::INFINITY;
            for p in PERMS {
                let assigned = TurningPoints {
                    roots: [
                        rotated.roots[p[0]],
                        rotated.roots[p[1]],
                        rotated.roots[p[2]],
                        rotated.roots[p[3]],
                    ],
                };
                let Ok(ctx) = context_from_turning_points(1.0, assigned) else {
                    continue;
                };
                let t = period(&ctx, row.m, row.n);
                if t.re.abs() > 1e-12 {
                    best = best.min(t.im.abs() / t.re.abs());
                }
            }
            assert!(
                best <= 1e-6,
                "rotation {s}: no assignment sees a real period at θ = {} ({},{}), best {best:.3e}",
                row.located_parameter,
                row.m,
                row.n
            );
        }
    }
}

#[test]
fn duality_maps_levels_to_negated_levels() {
    let rows = discretize_energy(&energy_cfg(1, c(1.0, 1.0)), 1, 1, (0.2, 0.35)).unwrap();
    assert_eq!(rows.len(), 1);
    let dual = duality_check(c(1.0, 1.0), 1.0, &rows).unwrap();
    assert_eq!(dual.len(), 1);
    assert!(dual[0].matched, "dual level missing: {:?}", dual[0]);
    let de = dual[0].dual_e.unwrap();
    assert!((de + rows[0].located_parameter).abs() <= 1e-4);
}

#[test]
fn catalog_lists_the_quantized_phases() {
    let cat = pure_quartic_catalog(1).unwrap();
    // Labels with |m|, |n| ≤ 1: (0,1), (1,−1), (1,0), (1,1).
    assert_eq!(cat.len(), 4);
    let find = |m: i64, n: i64| cat.iter().find(|e| (e.m, e.n) == (m, n)).unwrap();
    assert_eq!(find(1, 0).theta, 0.0);
    assert_eq!(find(1, 0).family, EndpointFamily::Hermitian);
    assert!((find(0, 1).theta - PI).abs() < 1e-15);
    assert_eq!(find(0, 1).family, EndpointFamily::WrongSign);
    assert!((find(1, 1).theta - 1.2870022175865687736).abs() < 1e-15);
    assert_eq!(find(1, 1).family, EndpointFamily::Generic);
    // Sorted by θ and pairwise distinct.
    for w in cat.windows(2) {
        assert!(w[1].theta - w[0].theta > 1e-12);
    }
    assert!(matches!(
        pure_quartic_catalog(0),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn catalog_phases_stay_distinct_at_depth() {
    let cat = pure_quartic_catalog(4).unwrap();
    let mut thetas: Vec<f64> = cat.iter().map(|e| e.theta).collect();
    thetas.sort_by(f64::total_cmp);
    for w in thetas.windows(2) {
        assert!(w[1] - w[0] > 1e-12, "phases {} and {} collide", w[0], w[1]);
    }
}
