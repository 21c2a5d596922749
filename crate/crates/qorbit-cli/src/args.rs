//! Command-line surface of the `qorbit` binary.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "qorbit",
    version,
    about = "Periodic complex trajectories of quartic Hamiltonians",
    after_help = "Exit codes: 0 success, 1 invalid usage or unwritable output, \
                  2 numeric failure, 3 empty result set."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Scan the phase θ of b = |b|·e^{iθ} for phases hosting periodic orbits
    /// of H = p² + x⁴ + b·x^k at fixed energy.
    ScanTheta(ScanThetaArgs),
    /// Locate the discrete energies in a window at which the orbit labeled
    /// (m, n) of H = p² + x⁴ + b·x^k is periodic.
    DiscretizeEnergy(DiscretizeEnergyArgs),
    /// Trace one trajectory from its turning point, analytically and/or by
    /// direct integration.
    Trace(TraceArgs),
    /// List the quantized phases θ at which H = p² + μ_r·e^{iθ}·x⁴ has a
    /// periodic orbit, with their periods.
    PureQuartic(PureQuarticArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct ScanThetaArgs {
    /// Perturbation exponent k of b·x^k (1 or 2).
    #[arg(long)]
    pub k: u8,
    /// Modulus |b| of the rotating coefficient.
    #[arg(long, default_value_t = 1.0)]
    pub br: f64,
    /// Real energy of the orbits.
    #[arg(long, default_value_t = 1.0)]
    pub energy: f64,
    /// Largest |m|, |n| of the enumerated orbit labels.
    #[arg(long, default_value_t = 3)]
    pub mn_max: i64,
    /// Number of bracketing nodes on the phase circle.
    #[arg(long, default_value_t = 2000)]
    pub grid: usize,
    /// Output CSV path.
    #[arg(long, default_value = "scan_theta.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct DiscretizeEnergyArgs {
    /// Perturbation exponent k of b·x^k (1 or 2).
    #[arg(long)]
    pub k: u8,
    /// Real part of the coefficient b.
    #[arg(long)]
    pub b_re: f64,
    /// Imaginary part of the coefficient b.
    #[arg(long)]
    pub b_im: f64,
    /// Winding number m of the orbit label.
    #[arg(long)]
    pub m: i64,
    /// Winding number n of the orbit label.
    #[arg(long)]
    pub n: i64,
    /// Lower edge of the energy window.
    #[arg(long, default_value_t = -5.0)]
    pub e_min: f64,
    /// Upper edge of the energy window.
    #[arg(long, default_value_t = 5.0)]
    pub e_max: f64,
    /// Number of bracketing nodes in the window.
    #[arg(long, default_value_t = 2000)]
    pub grid: usize,
    /// Output CSV path.
    #[arg(long, default_value = "discretize.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct TraceArgs {
    /// Perturbation exponent k of b·x^k (1 or 2).
    #[arg(long)]
    pub k: u8,
    /// Quartic coefficient a.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Real part of the coefficient b.
    #[arg(long)]
    pub b_re: f64,
    /// Imaginary part of the coefficient b.
    #[arg(long)]
    pub b_im: f64,
    /// Real energy of the trajectory.
    #[arg(long, default_value_t = 1.0)]
    pub energy: f64,
    /// Number of nominal periods to trace.
    #[arg(long, default_value_t = 1.0)]
    pub periods: f64,
    /// Number of CSV sample rows (at least 8).
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
    /// Propagation method for the samples.
    #[arg(long, value_enum, default_value_t = Method::Analytic)]
    pub method: Method,
    /// Output CSV path.
    #[arg(long, default_value = "trace.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct PureQuarticArgs {
    /// Largest |m|, |n| of the enumerated orbit labels.
    #[arg(long, default_value_t = 3)]
    pub mn_max: i64,
    /// Stiffness modulus μ_r of H = p² + μ_r·e^{iθ}·x⁴.
    #[arg(long, default_value_t = 1.0)]
    pub mu_r: f64,
    /// Real energy of the orbits (positive).
    #[arg(long, default_value_t = 1.0)]
    pub energy: f64,
    /// Cross-check every row by integrating the orbit to closure.
    #[arg(long)]
    pub verify: bool,
    /// Output CSV path.
    #[arg(long, default_value = "pure_quartic.csv")]
    pub out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Elliptic-function evaluation on a uniform time grid.
    Analytic,
    /// Adaptive integration of Hamilton's equations, resampled to the grid.
    Ode,
    /// Both, side by side, with their maximum deviation in the manifest.
    Both,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Ode => "ode",
            Method::Both => "both",
        }
    }
}
