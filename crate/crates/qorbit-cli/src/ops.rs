//! Implementations of the four subcommands.

use crate::args::{
    Command, DiscretizeEnergyArgs, Method, PureQuarticArgs, ScanThetaArgs, TraceArgs,
};
use crate::output::{
    atomic_write, fmt, render_csv, sibling, versions, write_manifest, OutputEntry, RunManifest,
};
use num_complex::Complex64;
use qorbit_core::periodicity::{build_context, period, pure_quartic_period, real_period};
use qorbit_core::quartic::QuarticSystem;
use qorbit_core::scan::{discretize_energy, pure_quartic_catalog, scan_theta, ScanConfig, ScanMode};
use qorbit_core::trajectory::{
    analytic_trajectory, detect_closure, ode_trajectory, ode_trajectory_mu, sample_state,
};
use serde_json::{json, Value};
use std::fmt::{self as stdfmt, Display};
use std::path::Path;
use std::time::Instant;

/// Bisection width at which scan brackets are considered refined.
const REFINE_TOL: f64 = 1e-10;
/// Largest denominator searched for a real element of the period lattice.
const MAX_DEN: u64 = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub enum CliError {
    /// Invalid arguments or unusable parameter combinations (exit 1).
    Usage(String),
    /// Output files could not be written (exit 1).
    Io(std::io::Error),
    /// The computation itself failed (exit 2).
    Numeric(qorbit_core::Error),
    /// The computation failed without a library error to forward (exit 2).
    Failed(String),
    /// The run succeeded but produced no results (exit 3).
    Empty(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) | CliError::Failed(_) => 2,
            CliError::Empty(_) => 3,
        }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut stdfmt::Formatter<'_>) -> stdfmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Failed(msg) | CliError::Empty(msg) => {
                write!(f, "{msg}")
            }
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl From<qorbit_core::Error> for CliError {
    fn from(e: qorbit_core::Error) -> Self {
        match e {
            qorbit_core::Error::InvalidInput(msg) => CliError::Usage(msg),
            other => CliError::Numeric(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub fn run(cmd: Command) -> Result<(), CliError> {
    let t0 = Instant::now();
    match cmd {
        Command::ScanTheta(args) => scan_theta_cmd(&args, t0),
        Command::DiscretizeEnergy(args) => discretize_energy_cmd(&args, t0),
        Command::Trace(args) => trace_cmd(&args, t0),
        Command::PureQuartic(args) => pure_quartic_cmd(&args, t0),
    }
}

fn finish(
    out: &Path,
    command: &str,
    parameters: Value,
    outputs: Vec<OutputEntry>,
    results: Value,
    t0: Instant,
) -> Result<(), CliError> {
    let manifest = RunManifest {
        command: command.to_string(),
        parameters,
        outputs,
        versions: versions(),
        wall_time: t0.elapsed().as_secs_f64(),
        results,
    };
    write_manifest(out, &manifest)?;
    Ok(())
}

fn scan_theta_cmd(args: &ScanThetaArgs, t0: Instant) -> Result<(), CliError> {
    let cfg = ScanConfig {
        a: 1.0,
        k: args.k,
        mode: ScanMode::Theta {
            b_abs: args.br,
            energy: args.energy,
        },
        mn_max: args.mn_max,
        grid_points: args.grid,
        refine_tol: REFINE_TOL,
    };
    let rows = scan_theta(&cfg)?;
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|s| {
            vec![
                fmt(s.located_parameter),
                fmt(s.n as f64 / s.m as f64),
                s.m.to_string(),
                s.n.to_string(),
                fmt(s.t_p),
                fmt(s.residual),
            ]
        })
        .collect();
    atomic_write(&args.out, &render_csv("theta,r,m,n,period,residual", &csv_rows))?;
    finish(
        &args.out,
        "scan-theta",
        json!({
            "k": args.k,
            "br": args.br,
            "energy": args.energy,
            "mn_max": args.mn_max,
            "grid": args.grid,
            "refine_tol": REFINE_TOL,
            "out": args.out.display().to_string(),
        }),
        vec![OutputEntry {
            path: args.out.display().to_string(),
            rows: csv_rows.len(),
        }],
        json!({ "solutions": csv_rows.len() }),
        t0,
    )?;
    if rows.is_empty() {
        return Err(CliError::Empty("the scan located no periodic phases".into()));
    }
    Ok(())
}

fn discretize_energy_cmd(args: &DiscretizeEnergyArgs, t0: Instant) -> Result<(), CliError> {
    let b = Complex64::new(args.b_re, args.b_im);
    let cfg = ScanConfig {
        a: 1.0,
        k: args.k,
        mode: ScanMode::Energy { b },
        mn_max: args.m.abs().max(args.n.abs()).max(1),
        grid_points: args.grid,
        refine_tol: REFINE_TOL,
    };
    let rows = discretize_energy(&cfg, args.m, args.n, (args.e_min, args.e_max))?;
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|s| {
            vec![
                s.m.to_string(),
                s.n.to_string(),
                fmt(s.located_parameter),
                fmt(s.t_p),
                s.relabeling.to_string(),
                fmt(s.residual),
            ]
        })
        .collect();
    atomic_write(
        &args.out,
        &render_csv("m,n,E,period,relabeling,residual", &csv_rows),
    )?;
    finish(
        &args.out,
        "discretize-energy",
        json!({
            "k": args.k,
            "b_re": args.b_re,
            "b_im": args.b_im,
            "m": args.m,
            "n": args.n,
            "e_min": args.e_min,
            "e_max": args.e_max,
            "grid": args.grid,
            "refine_tol": REFINE_TOL,
            "out": args.out.display().to_string(),
        }),
        vec![OutputEntry {
            path: args.out.display().to_string(),
            rows: csv_rows.len(),
        }],
        json!({ "solutions": csv_rows.len() }),
        t0,
    )?;
    if rows.is_empty() {
        return Err(CliError::Empty(
            "no periodic energy for this label lies in the window".into(),
        ));
    }
    Ok(())
}

fn trace_cmd(args: &TraceArgs, t0: Instant) -> Result<(), CliError> {
    if args.samples < 8 {
        return Err(CliError::Usage(format!(
            "--samples must be at least 8, got {}",
            args.samples
        )));
    }
    if !(args.periods > 0.0 && args.periods.is_finite()) {
        return Err(CliError::Usage(format!(
            "--periods must be positive, got {}",
            args.periods
        )));
    }
    let b = Complex64::new(args.b_re, args.b_im);
    let sys = QuarticSystem::new(args.a, b, args.k, Complex64::new(args.energy, 0.0))?;
    let ctx = build_context(&sys)?;
    let rp = real_period(&ctx, MAX_DEN);
    // Without a real period the (1, 1) lattice modulus sets the time scale.
    let t_nominal = match &rp {
        Some(r) => r.t,
        None => period(&ctx, 1, 1).norm(),
    };
    let t_end = args.periods * t_nominal;
    let n = args.samples;
    let t_grid: Vec<f64> = (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect();

    let analytic = if args.method != Method::Ode {
        Some(analytic_trajectory(&ctx, &sys, &t_grid)?)
    } else {
        None
    };
    let (ode_states, closure) = if args.method != Method::Analytic {
        let t_ode_end = t_end.max(1.15 * t_nominal);
        let dt_max = t_nominal / (4.0 * n.max(512) as f64);
        let traj = ode_trajectory(&sys, ctx.tp.x(1), ZERO, t_ode_end, dt_max)?;
        let states = t_grid
            .iter()
            .map(|&t| sample_state(&traj.samples, t))
            .collect::<qorbit_core::Result<Vec<_>>>()?;
        let closure = match &rp {
            Some(r) => {
                let chk = detect_closure(&traj, r.t)?;
                json!({
                    "closed": chk.closed,
                    "measured_period": chk.measured_period,
                    "residual": chk.residual,
                    "scale": chk.scale,
                })
            }
            None => Value::Null,
        };
        (Some(states), closure)
    } else {
        (None, Value::Null)
    };

    let header = match args.method {
        Method::Analytic | Method::Ode => "t,re_x,im_x,re_p,im_p",
        Method::Both => "t,re_x,im_x,re_p,im_p,re_x_ode,im_x_ode,re_p_ode,im_p_ode",
    };
    let mut max_deviation = 0.0f64;
    let csv_rows: Vec<Vec<String>> = (0..n)
        .map(|i| {
            let mut row = vec![fmt(t_grid[i])];
            if let Some(traj) = &analytic {
                let s = &traj.samples[i];
                row.extend([fmt(s.x.re), fmt(s.x.im), fmt(s.p.re), fmt(s.p.im)]);
            }
            if let Some(states) = &ode_states {
                let (x, p) = states[i];
                if let Some(traj) = &analytic {
                    let s = &traj.samples[i];
                    max_deviation = max_deviation.max((s.x - x).norm() + (s.p - p).norm());
                }
                row.extend([fmt(x.re), fmt(x.im), fmt(p.re), fmt(p.im)]);
            }
            row
        })
        .collect();
    atomic_write(&args.out, &render_csv(header, &csv_rows))?;

    // Sidecar with the labeled turning points the trace started from.
    let roots: Vec<Value> = ctx
        .tp
        .roots
        .iter()
        .map(|r| json!({ "re": r.re, "im": r.im }))
        .collect();
    let sidecar = sibling(&args.out, ".turning_points.json");
    let mut sidecar_bytes = serde_json::to_vec_pretty(&json!({ "roots": roots }))
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
    sidecar_bytes.push(b'\n');
    atomic_write(&sidecar, &sidecar_bytes)?;

    let mut results = json!({
        "real_period": rp.as_ref().map(|r| json!({ "j": r.j, "l": r.l, "t": r.t })),
        "nominal_period": t_nominal,
        "closure": closure,
    });
    if args.method == Method::Both {
        results["max_deviation"] = json!(max_deviation);
    }
    finish(
        &args.out,
        "trace",
        json!({
            "k": args.k,
            "a": args.a,
            "b_re": args.b_re,
            "b_im": args.b_im,
            "energy": args.energy,
            "periods": args.periods,
            "samples": args.samples,
            "method": args.method.as_str(),
            "out": args.out.display().to_string(),
        }),
        vec![
            OutputEntry {
                path: args.out.display().to_string(),
                rows: csv_rows.len(),
            },
            OutputEntry {
                path: sidecar.display().to_string(),
                rows: 4,
            },
        ],
        results,
        t0,
    )
}

fn pure_quartic_cmd(args: &PureQuarticArgs, t0: Instant) -> Result<(), CliError> {
    if !(args.mu_r > 0.0 && args.mu_r.is_finite()) {
        return Err(CliError::Usage(format!(
            "--mu-r must be positive, got {}",
            args.mu_r
        )));
    }
    if !(args.energy > 0.0 && args.energy.is_finite()) {
        return Err(CliError::Usage(format!(
            "--energy must be positive for the pure quartic, got {}",
            args.energy
        )));
    }
    let catalog = pure_quartic_catalog(args.mn_max)?;
    let e = Complex64::new(args.energy, 0.0);
    let mut csv_rows = Vec::with_capacity(catalog.len());
    for entry in &catalog {
        let t_p = pure_quartic_period(args.mu_r, args.energy, entry.m, entry.n);
        let mut row = vec![
            entry.m.to_string(),
            entry.n.to_string(),
            fmt(entry.theta),
            fmt(t_p),
        ];
        if args.verify {
            row.push(fmt(verify_closure(args.mu_r, e, entry.theta, t_p)?));
        }
        csv_rows.push(row);
    }
    let header = if args.verify {
        "m,n,theta,period,closure_residual"
    } else {
        "m,n,theta,period"
    };
    atomic_write(&args.out, &render_csv(header, &csv_rows))?;

    let mut results = json!({ "solutions": csv_rows.len() });
    if args.verify {
        // Quadrupling the stiffness of the n = 0 orbit reproduces the
        // inverted-quartic period exactly; record the identity check.
        let lhs = pure_quartic_period(4.0 * args.mu_r, args.energy, 1, 0);
        let rhs = pure_quartic_period(args.mu_r, args.energy, 0, 1);
        results["identity"] = json!({
            "quadrupled_stiffness": lhs,
            "inverted_quartic": rhs,
            "difference": (lhs - rhs).abs(),
        });
    }
    finish(
        &args.out,
        "pure-quartic",
        json!({
            "mn_max": args.mn_max,
            "mu_r": args.mu_r,
            "energy": args.energy,
            "verify": args.verify,
            "out": args.out.display().to_string(),
        }),
        vec![OutputEntry {
            path: args.out.display().to_string(),
            rows: csv_rows.len(),
        }],
        results,
        t0,
    )
}

/// Integrates the orbit at phase θ from each fourth-root rotation of the
/// principal turning point and returns the smallest phase-space return
/// distance at the predicted period.
fn verify_closure(mu_r: f64, e: Complex64, theta: f64, t_p: f64) -> Result<f64, CliError> {
    let mu = Complex64::from_polar(mu_r, theta);
    let x1 = (e / mu).powf(0.25);
    let i = Complex64::new(0.0, 1.0);
    let mut best = f64::INFINITY;
    for j in 0..4u32 {
        let start = x1 * i.powu(j);
        let Ok(traj) = ode_trajectory_mu(mu, e, start, ZERO, 1.2 * t_p, t_p / 512.0) else {
            continue;
        };
        if let Ok(chk) = detect_closure(&traj, t_p) {
            best = best.min(chk.residual);
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(CliError::Failed(format!(
            "no turning-point start closes at θ = {theta}"
        )))
    }
}
