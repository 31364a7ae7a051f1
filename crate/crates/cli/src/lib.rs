//! `tdt`: one-shot evaluations and grid sweeps over the mean-field phase
//! diagram of the tricritical Dicke triangle.

pub mod config;
pub mod output;
pub mod sweep;

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tdt_core::boundaries::{
    csr_boundary_lambda, first_order_lambda, is_chiral_side, second_order_point, sr_boundary_lambda, tcp,
    theta_c, triple_point, CriticalPoint,
};
use tdt_core::meanfield::{minimize_energy, observables};
use tdt_core::normal_phase::spectrum;
use tdt_core::scaling::{beta_exponent, default_beta_grid, default_eta_grid, eta_exponent, geometric_grid, ScalingFit};
use tdt_core::ModelParams;
use tdt_core::landau::GAMMA_TCP;

use crate::config::SweepConfig;
use crate::output::Record;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] tdt_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 1 for errors raised by the model or the filesystem, 2 for bad usage.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "tdt", version, about = "Mean-field phase diagram of the tricritical Dicke triangle")]
pub struct Cli {
    /// Record layout: aligned text or one JSON object.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Read every input angle in degrees.
    #[arg(long, global = true)]
    pub degrees: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form or located phase boundary.
    Boundary(BoundaryArgs),
    /// Normal-phase excitation spectrum.
    Spectrum(PointArgs),
    /// Mean-field ground state and observables.
    Minimize(MinimizeArgs),
    /// Grid sweep written as a dataset.
    Sweep(SweepArgs),
    /// Critical exponent fit.
    Scaling(ScalingArgs),
    /// Photon loop current of the ground state.
    Current(MinimizeArgs),
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.1)]
    pub j_ratio: f64,
    /// Cavity frequency.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Atomic level spacing.
    #[arg(long, default_value_t = 1.0)]
    pub omega_atom: f64,
}

#[derive(Debug, Args)]
pub struct MinimizeArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, default_value_t = tdt_core::meanfield::DEFAULT_N_STARTS)]
    pub n_starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryKind {
    Sr,
    Csr,
    ThetaC,
    Tcp,
    Ctcp,
    Triple,
    FirstOrder,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[arg(long, value_enum)]
    pub kind: BoundaryKind,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub j_ratio: f64,
    /// Bisection bracket for `first-order`, as `lo,hi`.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub bracket: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScalingTargetArg {
    Beta,
    Eta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PointKind {
    SecondOrder,
    Tcp,
    Ctcp,
    Triple,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[arg(long, value_enum)]
    pub target: ScalingTargetArg,
    #[arg(long, value_enum, default_value_t = PointKind::SecondOrder)]
    pub point: PointKind,
    /// Used by `second-order` and `triple`.
    #[arg(long, default_value_t = 0.9)]
    pub gamma: f64,
    /// Defaults: 2pi/3 for `tcp`, pi/3 for `ctcp`, theta_c for `triple`.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Defaults to 0.1 for `beta` and 0.01 for `eta`.
    #[arg(long)]
    pub j_ratio: Option<f64>,
    #[arg(long)]
    pub l_min: Option<f64>,
    #[arg(long)]
    pub l_max: Option<f64>,
    #[arg(long, default_value_t = tdt_core::scaling::DEFAULT_POINTS)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// TOML sweep configuration.
    #[arg(long, conflicts_with = "replay", required_unless_present = "replay")]
    pub config: Option<PathBuf>,
    /// Re-run the config embedded in an existing text dataset.
    #[arg(long)]
    pub replay: Option<PathBuf>,
    /// Destination; overrides `output_path`. `-` writes to stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = "TDT_JOBS")]
    pub jobs: Option<usize>,
}

fn angle(theta: f64, degrees: bool) -> f64 {
    if degrees { theta.to_radians() } else { theta }
}

fn point_params(p: &PointArgs, degrees: bool) -> Result<ModelParams, CliError> {
    Ok(ModelParams::with_frequencies(
        p.omega,
        p.omega_atom,
        p.lambda,
        p.gamma,
        angle(p.theta, degrees),
        p.j_ratio,
    )?)
}

fn need(v: Option<f64>, name: &str, kind: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{name} is required for {kind}")))
}

fn critical_record(cp: &CriticalPoint) -> Record {
    Record::new()
        .text("kind", cp.kind.label())
        .num("gamma", cp.gamma)
        .num("lambda", cp.lambda)
        .num("theta", cp.theta)
        .num("j_ratio", cp.j_ratio)
}

fn boundary(a: &BoundaryArgs, degrees: bool) -> Result<Record, CliError> {
    let theta = a.theta.map(|t| angle(t, degrees));
    let j = a.j_ratio;
    Ok(match a.kind {
        BoundaryKind::Sr | BoundaryKind::Csr => {
            let gamma = need(a.gamma, "gamma", "this boundary")?;
            let theta = need(theta, "theta", "this boundary")?;
            let (label, lambda, chiral) = if a.kind == BoundaryKind::Sr {
                ("second_order_SR", sr_boundary_lambda(gamma, theta, j)?, false)
            } else {
                ("second_order_CSR", csr_boundary_lambda(gamma, theta, j)?, true)
            };
            let on_side = is_chiral_side(theta, j)? == chiral;
            Record::new()
                .text("kind", label)
                .num("gamma", gamma)
                .num("lambda", lambda)
                .num("theta", theta)
                .num("j_ratio", j)
                .flag("second_order_valid", gamma >= GAMMA_TCP && on_side)
        }
        BoundaryKind::ThetaC => Record::new().num("j_ratio", j).num("theta_c", theta_c(j)?),
        BoundaryKind::Tcp => critical_record(&tcp(theta.unwrap_or(2.0 * PI / 3.0), j, false)?),
        BoundaryKind::Ctcp => critical_record(&tcp(theta.unwrap_or(PI / 3.0), j, true)?),
        BoundaryKind::Triple => critical_record(&triple_point(need(a.gamma, "gamma", "triple")?, j)?),
        BoundaryKind::FirstOrder => {
            let gamma = need(a.gamma, "gamma", "first-order")?;
            let theta = need(theta, "theta", "first-order")?;
            let bracket = a.bracket.as_ref().map(|b| (b[0], b[1]));
            let f = first_order_lambda(gamma, theta, j, bracket)?;
            critical_record(&f.point)
                .num("delta_e", f.delta_e)
                .opt("landau_estimate", f.landau_estimate)
                .num("jump", f.jump)
        }
    })
}

fn spectrum_record(p: &ModelParams) -> Result<Record, CliError> {
    let s = spectrum(p)?;
    Ok(Record::new()
        .nums("q", &s.q_values)
        .nums("omega_q", &s.omega_q)
        .nums("epsilon_q", &s.epsilon_q)
        .nums("beta_q", &s.beta_q)
        .num("ground_correction", s.ground_correction))
}

fn minimize_record(a: &MinimizeArgs, degrees: bool, current_only: bool) -> Result<Record, CliError> {
    let p = point_params(&a.point, degrees)?;
    let s = minimize_energy(&p, a.n_starts, a.seed)?;
    let obs = observables(&p, &s.order);
    if current_only {
        return Ok(Record::new().text("phase", s.phase.label()).num("i_ph", obs.i_ph));
    }
    Ok(Record::new()
        .text("phase", s.phase.label())
        .num("energy", s.energy)
        .flag("converged", s.converged)
        .num("residual", s.residual)
        .nums("A", &s.order.a)
        .nums("B", &s.order.b)
        .num("n_ph", obs.n_ph)
        .num("i_ph", obs.i_ph)
        .nums("h", &obs.h_exp))
}

fn fit_json(f: &ScalingFit) -> serde_json::Value {
    serde_json::to_value(f).expect("fit serializes")
}

fn scaling(a: &ScalingArgs, degrees: bool) -> Result<Record, CliError> {
    let beta = a.target == ScalingTargetArg::Beta;
    let j = a.j_ratio.unwrap_or(if beta { 0.1 } else { 0.01 });
    let theta = a.theta.map(|t| angle(t, degrees));
    let cp = match a.point {
        PointKind::SecondOrder => second_order_point(a.gamma, need(theta, "theta", "second-order")?, j)?,
        PointKind::Tcp => tcp(theta.unwrap_or(2.0 * PI / 3.0), j, false)?,
        PointKind::Ctcp => tcp(theta.unwrap_or(PI / 3.0), j, true)?,
        PointKind::Triple => triple_point(a.gamma, j)?,
    };
    let default = if beta { default_beta_grid() } else { default_eta_grid() };
    let grid = match (a.l_min, a.l_max) {
        (None, None) if a.points == tdt_core::scaling::DEFAULT_POINTS => default,
        (lo, hi) => geometric_grid(
            lo.unwrap_or(default[0]),
            hi.unwrap_or(default[default.len() - 1]),
            a.points,
        )?,
    };
    let fits = if beta { vec![beta_exponent(&cp, &grid)?] } else { eta_exponent(&cp, &grid)? };
    let mut r = critical_record(&cp);
    for (i, f) in fits.iter().enumerate() {
        let suffix = if i == 0 { String::new() } else { format!("_{}", i + 1) };
        r = r
            .text(&format!("target{suffix}"), f.target.label())
            .num(&format!("exponent{suffix}"), f.exponent)
            .num(&format!("r_squared{suffix}"), f.r_squared)
            .flag(&format!("accepted{suffix}"), f.accepted)
            .opt(&format!("q{suffix}"), f.q);
    }
    let (lo, hi) = fits[0].l_range;
    Ok(r.num("l_min", lo)
        .num("l_max", hi)
        .int("n_points", fits[0].n_points as i64)
        .value("fits", serde_json::Value::Array(fits.iter().map(fit_json).collect())))
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn sweep_cmd(a: &SweepArgs, format: Format, degrees: bool) -> Result<String, CliError> {
    let mut cfg = match (&a.config, &a.replay) {
        (Some(path), _) => {
            let mut c = SweepConfig::from_toml(&read(path)?)?;
            if degrees {
                c.angles_from_degrees();
            }
            c
        }
        // embedded configs are already resolved to radians
        (None, Some(path)) => sweep::config_from_dataset(&read(path)?)?,
        (None, None) => return Err(CliError::Usage("one of --config or --replay is required".into())),
    };
    if let Some(out) = &a.output {
        cfg.output_path = Some(out.display().to_string());
    }
    let jobs = a.jobs.unwrap_or_else(default_jobs);
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be >= 1".into()));
    }
    let records = sweep::run_sweep(&cfg, jobs)?;
    let text = sweep::render(&cfg, &records, format);
    match cfg.output_path.as_deref() {
        None | Some("-") => Ok(text),
        Some(path) => {
            fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })?;
            Ok(Record::new()
                .text("output", path)
                .int("records", records.len() as i64)
                .render(format))
        }
    }
}

/// Execute a parsed command line and return what goes to stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let fmt = cli.format;
    let deg = cli.degrees;
    let record = match &cli.command {
        Command::Boundary(a) => boundary(a, deg)?,
        Command::Spectrum(p) => spectrum_record(&point_params(p, deg)?)?,
        Command::Minimize(a) => minimize_record(a, deg, false)?,
        Command::Current(a) => minimize_record(a, deg, true)?,
        Command::Scaling(a) => scaling(a, deg)?,
        Command::Sweep(a) => return sweep_cmd(a, fmt, deg),
    };
    Ok(record.render(fmt))
}
