//! WebAssembly bindings for the browser demo.
//!
//! Three operations are exported, each returning a JSON string so the page
//! needs no generated TypeScript glue beyond the wasm-bindgen loader:
//!
//! - [`catalog_json`] — the quantized phases of `H = p² + μ_r e^{iθ} x⁴`
//!   with their orbit periods,
//! - [`discretize_json`] — the discrete energies at which the (m, n) orbit
//!   of `H = p² + a x⁴ + b xᵏ` is periodic inside a window,
//! - [`trace_json`] — one period of the closed-form trajectory in the
//!   complex position plane, with the turning points.
//!
//! The JSON builders are plain functions over the core library; the thin
//! `#[wasm_bindgen]` wrappers only translate errors, so the builders are
//! testable on any host target.

use num_complex::Complex64;
use qorbit_core::periodicity::{
    build_context, period, pure_quartic_period, real_period,
};
use qorbit_core::quartic::QuarticSystem;
use qorbit_core::scan::{
    discretize_energy, pure_quartic_catalog, EndpointFamily, ScanConfig, ScanMode,
};
use qorbit_core::trajectory::analytic_trajectory;
use qorbit_core::{Error, Result};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Builds the pure-quartic catalog with periods at stiffness `mu_r` and
/// energy `e`.
pub fn catalog(mn_max: i64, mu_r: f64, e: f64) -> Result<String> {
    let valid = mu_r.is_finite() && mu_r > 0.0 && e.is_finite() && e > 0.0;
    if !valid {
        return Err(Error::InvalidInput(format!(
            "stiffness and energy must be positive, got μ_r = {mu_r}, E = {e}"
        )));
    }
    let entries: Vec<_> = pure_quartic_catalog(mn_max)?
        .into_iter()
        .map(|c| {
            json!({
                "m": c.m,
                "n": c.n,
                "theta": c.theta,
                "period": pure_quartic_period(mu_r, e, c.m, c.n),
                "family": match c.family {
                    EndpointFamily::Generic => "generic",
                    EndpointFamily::Hermitian => "hermitian",
                    EndpointFamily::WrongSign => "wrong-sign",
                },
            })
        })
        .collect();
    Ok(json!({ "entries": entries }).to_string())
}

/// Locates the periodic energies of the (m, n) orbit of
/// `H = p² + x⁴ + b xᵏ` inside `(e_min, e_max)`.
pub fn discretize(
    k: u8,
    b_re: f64,
    b_im: f64,
    m: i64,
    n: i64,
    e_min: f64,
    e_max: f64,
) -> Result<String> {
    let cfg = ScanConfig {
        a: 1.0,
        k,
        mode: ScanMode::Energy { b: Complex64::new(b_re, b_im) },
        mn_max: m.abs().max(n.abs()).max(1),
        grid_points: 400,
        refine_tol: 1e-10,
    };
    let levels: Vec<_> = discretize_energy(&cfg, m, n, (e_min, e_max))?
        .into_iter()
        .map(|s| {
            json!({
                "m": s.m,
                "n": s.n,
                "energy": s.located_parameter,
                "period": s.t_p,
                "residual": s.residual,
            })
        })
        .collect();
    Ok(json!({ "levels": levels }).to_string())
}

/// Traces one nominal period of the closed-form orbit of
/// `H = p² + x⁴ + b xᵏ` at real energy `e`, sampled at `samples` points.
pub fn trace(k: u8, b_re: f64, b_im: f64, e: f64, samples: usize) -> Result<String> {
    if !(16..=4096).contains(&samples) {
        return Err(Error::InvalidInput(format!(
            "samples must lie in 16..=4096, got {samples}"
        )));
    }
    let sys = QuarticSystem::new(1.0, Complex64::new(b_re, b_im), k, Complex64::new(e, 0.0))?;
    let ctx = build_context(&sys)?;
    let rp = real_period(&ctx, 64);
    let t_p = match &rp {
        Some(r) => r.t,
        None => period(&ctx, 1, 1).norm(),
    };
    let grid: Vec<f64> = (0..samples)
        .map(|i| t_p * i as f64 / (samples - 1) as f64)
        .collect();
    let traj = analytic_trajectory(&ctx, &sys, &grid)?;
    let x: Vec<[f64; 2]> = traj.samples.iter().map(|s| [s.x.re, s.x.im]).collect();
    let p: Vec<[f64; 2]> = traj.samples.iter().map(|s| [s.p.re, s.p.im]).collect();
    let roots: Vec<[f64; 2]> = ctx.tp.roots.iter().map(|r| [r.re, r.im]).collect();
    Ok(json!({
        "period": t_p,
        "real_period": rp.map(|r| json!({ "j": r.j, "l": r.l, "t": r.t })),
        "turning_points": roots,
        "t": grid,
        "x": x,
        "p": p,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn catalog_json(mn_max: i64, mu_r: f64, energy: f64) -> std::result::Result<String, JsError> {
    Ok(catalog(mn_max, mu_r, energy)?)
}

#[wasm_bindgen]
pub fn discretize_json(
    k: u8,
    b_re: f64,
    b_im: f64,
    m: i64,
    n: i64,
    e_min: f64,
    e_max: f64,
) -> std::result::Result<String, JsError> {
    Ok(discretize(k, b_re, b_im, m, n, e_min, e_max)?)
}

#[wasm_bindgen]
pub fn trace_json(
    k: u8,
    b_re: f64,
    b_im: f64,
    energy: f64,
    samples: usize,
) -> std::result::Result<String, JsError> {
    Ok(trace(k, b_re, b_im, energy, samples)?)
}
