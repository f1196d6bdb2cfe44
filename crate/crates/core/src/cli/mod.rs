//! Command-line front end. [`run`] does all the work so the binary and the
//! tests share one code path; the binary only maps errors to exit codes.
//!
//! Numeric result lines read `name = value ± error unit`. Lines starting
//! with `#` are provenance.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::energy::corotating_total_energy;
use crate::error::Error;
use crate::params::ModelPoint;
use crate::rotation::{
    default_beta_grid, ell_zp, ground_state_report, omega_of_ell, stationary_energy,
    GroundStateVerdict,
};
use crate::spectrum::{gram_matrix, mode_frequencies, mode_functions, mode_residuals};

mod sweep;
mod verify;

pub use sweep::{parse_grid, parse_list, run_sweep, OutputFormat, Quantity, SweepRow, SweepTable};
pub use verify::{consistency_check, run_verify, CheckResult, VerifyLevel, VerifyReport};

/// Overrides the default tolerance of every subcommand.
pub const TOL_ENV: &str = "CASIMIR_RING_TOL";
pub const SINGLE_TOL: f64 = 1e-8;
pub const SWEEP_TOL: f64 = 1e-6;

pub const ARTIFACT: &str = concat!("casimir-ring ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("json encoding failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{failed} of {total} checks failed")]
    VerifyFailed { failed: usize, total: usize },
    #[error("{failed} of {total} sweep rows failed")]
    SweepRowsFailed { failed: usize, total: usize },
}

impl CliError {
    /// 2 domain, 3 numerical (including failed checks), 4 model violation,
    /// 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) => e.exit_code(),
            CliError::Io(_) | CliError::Json(_) => 1,
            CliError::VerifyFailed { .. } | CliError::SweepRowsFailed { .. } => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TolSource {
    Flag,
    Env(String),
    Default,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerance {
    pub value: f64,
    pub source: TolSource,
}

impl Tolerance {
    /// `--tol` wins over the environment, which wins over `default`.
    pub fn resolve(flag: Option<f64>, default: f64) -> Result<Self, Error> {
        Self::resolve_with(flag, std::env::var(TOL_ENV).ok().as_deref(), default)
    }

    pub fn resolve_with(flag: Option<f64>, env: Option<&str>, default: f64) -> Result<Self, Error> {
        let t = match (flag, env) {
            (Some(v), _) => Tolerance {
                value: v,
                source: TolSource::Flag,
            },
            (None, Some(raw)) => {
                let v = raw.trim().parse::<f64>().map_err(|_| {
                    Error::domain("tol", format!("{TOL_ENV}={raw:?} is not a number"))
                })?;
                Tolerance {
                    value: v,
                    source: TolSource::Env(raw.to_string()),
                }
            }
            (None, None) => Tolerance {
                value: default,
                source: TolSource::Default,
            },
        };
        if !(t.value > 0.0 && t.value.is_finite()) {
            return Err(Error::domain(
                "tol",
                format!("must be finite and > 0, got {}", t.value),
            ));
        }
        Ok(t)
    }

    pub fn provenance(&self) -> String {
        let from = match &self.source {
            TolSource::Flag => "--tol".to_string(),
            TolSource::Env(raw) => format!("environment {TOL_ENV}={raw}"),
            TolSource::Default => "default".to_string(),
        };
        format!("tolerance = {:e} ({from})", self.value)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "casimir-ring",
    version,
    about = "Casimir energy and zero-point angular momentum of a rotating ring"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mode frequencies α = ωR/c up to --alpha-max.
    Spectrum(SpectrumArgs),
    /// Co-rotating field energy, angular momentum and stationary energy.
    Energy(EnergyArgs),
    /// Tabulate a quantity over a β grid and a list of couplings.
    Sweep(SweepArgs),
    /// Run the built-in invariant checks.
    Verify(VerifyArgs),
    /// Find β for a given total angular momentum.
    Transform(TransformArgs),
}

#[derive(Debug, clap::Args)]
pub struct SpectrumArgs {
    /// Rim speed ΩR/c, |β| < 1.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    /// Coupling λR²/c² (`inf` for Dirichlet walls).
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 5.0)]
    pub alpha_max: f64,
    /// Also report residuals and inner products of each mode.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Frame {
    Corotating,
    Stationary,
}

#[derive(Debug, clap::Args)]
pub struct EnergyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long)]
    pub lambda: f64,
    /// Classical inertia I·c/(ħR).
    #[arg(long, default_value_t = 0.0)]
    pub inertia: f64,
    #[arg(long, value_enum, default_value_t = Frame::Corotating)]
    pub frame: Frame,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = Quantity::Izp)]
    pub quantity: Quantity,
    /// `lo:hi:n` for n evenly spaced points, or a comma-separated list.
    #[arg(long, default_value = "0:0.95:20", allow_hyphen_values = true)]
    pub beta_grid: String,
    #[arg(long, default_value = "0.5,2,10,100,1e6")]
    pub lambda_list: String,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = VerifyLevel::Fast)]
    pub level: VerifyLevel,
}

#[derive(Debug, clap::Args)]
pub struct TransformArgs {
    /// Total angular momentum in units of ħ.
    #[arg(long, allow_negative_numbers = true)]
    pub ell: f64,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub inertia: f64,
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Shortest round-trip form, switching to exponent notation outside
/// [1e-4, 1e7). Negative zero prints as `0`.
pub fn format_value(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".into()
    } else if (1e-4..1e7).contains(&a) || !v.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn format_error(e: f64) -> String {
    if e == 0.0 {
        "0".into()
    } else {
        format!("{e:.1e}")
    }
}

fn value_line(out: &mut dyn Write, name: &str, value: f64, err: f64, unit: &str) -> io::Result<()> {
    writeln!(
        out,
        "{name} = {} ± {} {unit}",
        format_value(value),
        format_error(err)
    )
}

fn header(out: &mut dyn Write, command: &str, tol: Option<&Tolerance>) -> io::Result<()> {
    writeln!(out, "# {ARTIFACT} {command}")?;
    if let Some(t) = tol {
        writeln!(out, "# {}", t.provenance())?;
    }
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum(a) => cmd_spectrum(&a, out),
        Command::Energy(a) => cmd_energy(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Transform(a) => cmd_transform(&a, out),
    }
}

fn cmd_spectrum(a: &SpectrumArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let point = ModelPoint::new(a.beta, a.lambda)?;
    let spectrum = mode_frequencies(&point, a.alpha_max)?;
    header(out, "spectrum", None)?;
    writeln!(
        out,
        "# beta = {}, lambda_hat = {}, alpha_max = {}",
        a.beta, a.lambda, a.alpha_max
    )?;
    writeln!(
        out,
        "# modes = {}, max relative secular residual = {:.1e}",
        spectrum.len(),
        spectrum.max_residual()
    )?;
    for (i, (&alpha, err)) in spectrum
        .alphas
        .iter()
        .zip(spectrum.error_estimates())
        .enumerate()
    {
        let tag = if spectrum.degenerate[i] {
            "  # degenerate"
        } else {
            ""
        };
        writeln!(
            out,
            "alpha[{}] = {} ± {} c/R{tag}",
            i + 1,
            format_value(alpha),
            format_error(err)
        )?;
    }
    if !a.check {
        return Ok(());
    }
    let modes = mode_functions(&spectrum)?;
    let gram = gram_matrix(&modes)?;
    let mut worst_off = 0.0f64;
    for (i, m) in modes.iter().enumerate() {
        let r = mode_residuals(m);
        let norm = gram[i][i];
        for (j, g) in gram[i].iter().enumerate() {
            if j != i {
                worst_off = worst_off.max(g.norm());
            }
        }
        writeln!(
            out,
            "# check mode {}: alpha = {}",
            i + 1,
            format_value(m.alpha)
        )?;
        value_line(out, "  ode_residual", r.ode, 0.0, "(dimensionless)")?;
        value_line(
            out,
            "  periodicity_defect",
            r.periodicity,
            0.0,
            "(dimensionless)",
        )?;
        value_line(out, "  jump_defect", r.jump, 0.0, "(dimensionless)")?;
        value_line(
            out,
            "  norm_defect",
            (norm - 1.0).norm(),
            0.0,
            "(dimensionless)",
        )?;
    }
    value_line(
        out,
        "max_off_diagonal_inner_product",
        worst_off,
        0.0,
        "(dimensionless)",
    )?;
    Ok(())
}

fn cmd_energy(a: &EnergyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let tol = Tolerance::resolve(a.tol, SINGLE_TOL)?;
    let point = ModelPoint::new(a.beta, a.lambda)?;
    let e = corotating_total_energy(&point, a.inertia, tol.value)?;
    let l = ell_zp(&point, tol.value)?;
    header(out, "energy", Some(&tol))?;
    writeln!(
        out,
        "# beta = {}, lambda_hat = {}, inertia_hat = {}",
        a.beta, a.lambda, a.inertia
    )?;
    if e.guard_clamps > 0 {
        writeln!(out, "# guard-band clamps = {}", e.guard_clamps)?;
    }
    let eu = "hbar*c/R";
    value_line(out, "field_energy", e.field_energy, e.quadrature_error, eu)?;
    value_line(out, "classical_term", e.classical_term, 0.0, eu)?;
    value_line(out, "total", e.total, e.quadrature_error, eu)?;
    value_line(out, "ell_zp", l.value, l.error, "hbar")?;
    value_line(
        out,
        "ell_total",
        a.inertia * a.beta + l.value,
        l.error,
        "hbar",
    )?;
    if a.frame == Frame::Stationary {
        let s = stationary_energy(&point, a.inertia, tol.value)?;
        value_line(out, "stationary_energy", s.value, s.error, eu)?;
    }
    Ok(())
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let tol = Tolerance::resolve(a.tol, SWEEP_TOL)?;
    let betas = parse_grid(&a.beta_grid)?;
    let lambdas = parse_list(&a.lambda_list)?;
    let table = run_sweep(a.quantity, &betas, &lambdas, &tol);
    match &a.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(a.format, &mut w)?;
            w.flush()?;
        }
        None => table.write(a.format, out)?,
    }
    let failed = table.rows.iter().filter(|r| r.value.is_none()).count();
    if failed > 0 {
        return Err(CliError::SweepRowsFailed {
            failed,
            total: table.rows.len(),
        });
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    header(out, "verify", None)?;
    writeln!(out, "# level = {:?}", a.level)?;
    let report = run_verify(a.level);
    for c in &report.checks {
        writeln!(out, "{c}")?;
    }
    let failed = report.failed();
    writeln!(out, "# {} checks, {failed} failed", report.checks.len())?;
    if failed > 0 {
        return Err(CliError::VerifyFailed {
            failed,
            total: report.checks.len(),
        });
    }
    Ok(())
}

fn cmd_transform(a: &TransformArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let tol = Tolerance::resolve(a.tol, SINGLE_TOL)?;
    let beta = omega_of_ell(a.ell, a.lambda, a.inertia, tol.value)?;
    let point = ModelPoint::new(beta, a.lambda)?;
    let e = corotating_total_energy(&point, a.inertia, tol.value)?;
    let s = stationary_energy(&point, a.inertia, tol.value)?;
    let report = ground_state_report(a.lambda, a.inertia, &default_beta_grid(), tol.value);
    header(out, "transform", Some(&tol))?;
    writeln!(
        out,
        "# ell = {}, lambda_hat = {}, inertia_hat = {}",
        a.ell, a.lambda, a.inertia
    )?;
    value_line(out, "beta", beta, tol.value.min(1e-12), "(Omega*R/c)")?;
    let eu = "hbar*c/R";
    value_line(
        out,
        "corotating_total_energy",
        e.total,
        e.quadrature_error,
        eu,
    )?;
    value_line(out, "stationary_energy", s.value, s.error, eu)?;
    writeln!(
        out,
        "# ground state over beta in [-0.95, 0.95] ({} points)",
        report.beta_grid.len()
    )?;
    let verdict = match report.verdict {
        GroundStateVerdict::NonRotating => "non-rotating",
        GroundStateVerdict::Degenerate => "degenerate",
        GroundStateVerdict::OutsideValidity => "outside semiclassical validity",
    };
    writeln!(out, "# verdict: {verdict}")?;
    value_line(
        out,
        "min_inertia_total",
        report.min_inertia_total,
        tol.value,
        "hbar*R/c",
    )?;
    value_line(out, "ell_zp_bound", report.ell_zp_bound, tol.value, "hbar")?;
    value_line(
        out,
        "response_lower_bound",
        report.response_lower_bound,
        tol.value,
        "(dimensionless)",
    )?;
    for f in &report.failures {
        writeln!(out, "# failed: {f}")?;
    }
    Ok(())
}
