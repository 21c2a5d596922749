mod common;

use common::SplitMix64;
use num_complex::Complex64;
use qorbit_core::quartic::{relabel_cyclic, solve_turning_points, QuarticSystem, TurningPoints};
use qorbit_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn unit_quartic_roots_in_canonical_order() {
    // x⁴ = 1 has roots {1, i, −1, −i}; canonical order is ascending
    // principal argument: −i (−π/2), 1 (0), i (π/2), −1 (π).
    let sys = QuarticSystem::new(1.0, c(0.0, 0.0), 1, c(1.0, 0.0)).unwrap();
    let tp = solve_turning_points(&sys).unwrap();
    let expected = [c(0.0, -1.0), c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)];
    for (got, want) in tp.roots.iter().zip(expected) {
        assert!(
            (got - want).norm() < 1e-12,
            "root {got} should be {want}"
        );
    }
}

#[test]
fn roots_satisfy_vieta_relations() {
    let mut rng = SplitMix64::new(11);
    for _ in 0..40 {
        let a = rng.range(0.3, 3.0) * if rng.uniform() < 0.5 { -1.0 } else { 1.0 };
        let b = c(rng.range(-2.0, 2.0), rng.range(-2.0, 2.0));
        let e = c(rng.range(-2.0, 2.0), rng.range(-1.0, 1.0));
        let k = if rng.uniform() < 0.5 { 1 } else { 2 };
        let sys = QuarticSystem::new(a, b, k, e).unwrap();
        let Ok(tp) = solve_turning_points(&sys) else {
            continue; // degenerate draws are rejected, not mislabeled
        };
        let [r0, r1, r2, r3] = tp.roots;
        let e1 = r0 + r1 + r2 + r3;
        let e2 = r0 * r1 + r0 * r2 + r0 * r3 + r1 * r2 + r1 * r3 + r2 * r3;
        let e3 = r0 * r1 * r2 + r0 * r1 * r3 + r0 * r2 * r3 + r1 * r2 * r3;
        let e4 = r0 * r1 * r2 * r3;
        let scale = tp.roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
        let tol = 1e-9 * scale.powi(4).max(1.0);
        // Monic form x⁴ + (b/a)xᵏ − E/a: no cubic term ever, and the
        // remaining coefficients depend on k.
        assert!(e1.norm() < tol, "Σxᵢ = {e1}");
        if k == 1 {
            assert!(e2.norm() < tol);
            assert!((e3 + b / a).norm() < tol);
        } else {
            assert!((e2 - b / a).norm() < tol);
            assert!(e3.norm() < tol);
        }
        assert!((e4 + e / a).norm() < tol);
    }
}

#[test]
fn root_residuals_are_tiny() {
    let mut rng = SplitMix64::new(23);
    for _ in 0..60 {
        let a = rng.range(0.2, 4.0);
        let b = c(rng.range(-3.0, 3.0), rng.range(-3.0, 3.0));
        let e = c(rng.range(-3.0, 3.0), rng.range(-2.0, 2.0));
        let k = if rng.uniform() < 0.5 { 1 } else { 2 };
        let sys = QuarticSystem::new(a, b, k, e).unwrap();
        let Ok(tp) = solve_turning_points(&sys) else {
            continue;
        };
        let bound = 1e-10 * 1.0f64.max(e.norm()).max(b.norm());
        for r in tp.roots {
            let res = sys.char_poly(r).norm();
            assert!(res <= bound, "residual {res:.3e} exceeds {bound:.3e}");
        }
    }
}

#[test]
fn solver_is_bitwise_deterministic() {
    let sys = QuarticSystem::new(1.0, c(1.0, 1.0), 1, c(0.27499, 0.0)).unwrap();
    let tp1 = solve_turning_points(&sys).unwrap();
    let tp2 = solve_turning_points(&sys).unwrap();
    for (u, v) in tp1.roots.iter().zip(tp2.roots) {
        assert_eq!(u.re.to_bits(), v.re.to_bits());
        assert_eq!(u.im.to_bits(), v.im.to_bits());
    }
}

#[test]
fn double_roots_are_rejected() {
    // x⁴ − 2x² + 1 = (x² − 1)²: double roots at ±1.
    let sys = QuarticSystem::new(1.0, c(-2.0, 0.0), 2, c(-1.0, 0.0)).unwrap();
    assert!(matches!(
        solve_turning_points(&sys),
        Err(Error::DegenerateRoots { .. })
    ));
    // E = 0 with k = 2 gives x²(x² + b): a double root at the origin.
    let sys = QuarticSystem::new(1.0, c(0.7, 0.3), 2, c(0.0, 0.0)).unwrap();
    assert!(matches!(
        solve_turning_points(&sys),
        Err(Error::DegenerateRoots { .. })
    ));
}

#[test]
fn cyclic_relabeling_rotates_roots() {
    let tp = TurningPoints {
        roots: [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)],
    };
    let shifted = relabel_cyclic(&tp, 1);
    assert_eq!(
        shifted.roots,
        [c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0), c(1.0, 0.0)]
    );
    assert_eq!(relabel_cyclic(&tp, 0).roots, tp.roots);
    // Four unit shifts compose to the identity.
    let mut four = tp;
    for _ in 0..4 {
        four = relabel_cyclic(&four, 1);
    }
    assert_eq!(four.roots, tp.roots);
}

#[test]
fn even_perturbation_gives_symmetric_roots() {
    // For k = 2 the turning-point polynomial is even: roots come in ± pairs.
    let mut rng = SplitMix64::new(37);
    for _ in 0..20 {
        let b = c(rng.range(-2.0, 2.0), rng.range(-2.0, 2.0));
        let e = c(rng.range(0.5, 3.0), rng.range(-1.0, 1.0));
        let sys = QuarticSystem::new(1.0, b, 2, e).unwrap();
        let Ok(tp) = solve_turning_points(&sys) else {
            continue;
        };
        for r in tp.roots {
            let has_negation = tp.roots.iter().any(|s| (s + r).norm() < 1e-9);
            assert!(has_negation, "root {r} lacks its negation");
        }
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(matches!(
        QuarticSystem::new(0.0, c(1.0, 0.0), 1, c(1.0, 0.0)),
        Err(Error::InvalidInput(_))
    ));
    assert!(matches!(
        QuarticSystem::new(f64::NAN, c(1.0, 0.0), 1, c(1.0, 0.0)),
        Err(Error::InvalidInput(_))
    ));
    assert!(matches!(
        QuarticSystem::new(1.0, c(1.0, 0.0), 3, c(1.0, 0.0)),
        Err(Error::InvalidInput(_))
    ));
    assert!(matches!(
        QuarticSystem::new(1.0, c(1.0, 0.0), 0, c(1.0, 0.0)),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn hamiltonian_and_gradient_agree_with_potential() {
    // dV/dx cross-checked against a central difference of V.
    let mut rng = SplitMix64::new(41);
    for _ in 0..20 {
        let b = c(rng.range(-2.0, 2.0), rng.range(-2.0, 2.0));
        let k = if rng.uniform() < 0.5 { 1 } else { 2 };
        let sys = QuarticSystem::new(1.3, b, k, c(1.0, 0.0)).unwrap();
        let x = c(rng.range(-1.5, 1.5), rng.range(-1.5, 1.5));
        let h = 1e-6;
        let fd = (sys.potential(x + c(h, 0.0)) - sys.potential(x - c(h, 0.0))) / (2.0 * h);
        assert!((fd - sys.potential_gradient(x)).norm() < 1e-7);
        let p = c(rng.range(-1.0, 1.0), rng.range(-1.0, 1.0));
        assert!((sys.hamiltonian(x, p) - (p * p + sys.potential(x))).norm() < 1e-15);
    }
}
