//! Parameter sweeps over a β grid and a list of couplings.

use std::io::{self, Write};

use clap::ValueEnum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{format_value, CliError, Tolerance, ARTIFACT};
use crate::energy::casimir_energy_corotating;
use crate::error::{Error, Result};
use crate::numerics::Estimate;
use crate::params::ModelPoint;
use crate::rotation::{ell_zp, inertia_zp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Zero-point moment of inertia.
    Izp,
    /// Zero-point angular momentum.
    Ellzp,
    /// Co-rotating field energy.
    Energy,
}

impl Quantity {
    pub fn unit(self) -> &'static str {
        match self {
            Quantity::Izp => "hbar*R/c",
            Quantity::Ellzp => "hbar",
            Quantity::Energy => "hbar*c/R",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Izp => "izp",
            Quantity::Ellzp => "ellzp",
            Quantity::Energy => "energy",
        }
    }

    fn evaluate(self, point: &ModelPoint, tol: f64) -> Result<Estimate> {
        match self {
            Quantity::Izp => inertia_zp(point, tol),
            Quantity::Ellzp => ell_zp(point, tol),
            Quantity::Energy => casimir_energy_corotating(point, tol).map(|e| Estimate {
                value: e.field_energy,
                error: e.quadrature_error,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub beta: f64,
    #[serde(with = "crate::params::coupling_serde")]
    pub lambda_hat: f64,
    /// `None` when the evaluation failed; see `failure`.
    pub value: Option<f64>,
    pub error_estimate: Option<f64>,
    /// Error estimate above the requested tolerance.
    pub degraded: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub artifact: String,
    pub tolerance: f64,
    pub tolerance_source: String,
    pub truncation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub quantity: Quantity,
    pub unit: String,
    pub beta_grid: Vec<f64>,
    #[serde(with = "crate::params::coupling_serde::list")]
    pub lambda_list: Vec<f64>,
    /// Ordered by (λ̂, β).
    pub rows: Vec<SweepRow>,
    pub provenance: Provenance,
}

const TRUNCATION: &str = "tanh-sinh on geometric panels up to a cutoff whose analytic tail bound \
     is below tol/10; Richardson differentiation from step min(1e-3, (1-|beta|)/10)";

fn parse_number(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::domain("grid", format!("{s:?} is not a number")))
}

/// `lo:hi:n` (n evenly spaced points, both ends included) or `a,b,c`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [lo, hi, n] => {
            let (lo, hi) = (parse_number(lo)?, parse_number(hi)?);
            let n: usize = n.trim().parse().map_err(|_| {
                Error::domain("grid", format!("point count {n:?} is not an integer"))
            })?;
            match n {
                0 => Err(Error::domain("grid", "needs at least one point")),
                1 => Ok(vec![lo]),
                _ => Ok((0..n)
                    .map(|i| {
                        let t = i as f64 / (n - 1) as f64;
                        lo * (1.0 - t) + hi * t
                    })
                    .collect()),
            }
        }
        [_] => parse_list(text),
        _ => Err(Error::domain(
            "grid",
            format!("expected lo:hi:n or a list, got {text:?}"),
        )),
    }
}

pub fn parse_list(text: &str) -> Result<Vec<f64>> {
    let v = text
        .split(',')
        .map(parse_number)
        .collect::<Result<Vec<f64>>>()?;
    if v.is_empty() {
        return Err(Error::domain("list", "empty"));
    }
    Ok(v)
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Evaluates `quantity` at every (λ̂, β) pair in parallel. Failures are
/// recorded per row; the table is always produced.
pub fn run_sweep(
    quantity: Quantity,
    betas: &[f64],
    lambdas: &[f64],
    tol: &Tolerance,
) -> SweepTable {
    let beta_grid = sorted(betas);
    let lambda_list = sorted(lambdas);
    let pairs: Vec<(f64, f64)> = lambda_list
        .iter()
        .flat_map(|&l| beta_grid.iter().map(move |&b| (l, b)))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|&(l, b)| {
            let r = ModelPoint::new(b, l).and_then(|p| quantity.evaluate(&p, tol.value));
            match r {
                Ok(e) => SweepRow {
                    beta: b,
                    lambda_hat: l,
                    value: Some(e.value),
                    error_estimate: Some(e.error),
                    degraded: e.error > tol.value,
                    failure: None,
                },
                Err(e) => SweepRow {
                    beta: b,
                    lambda_hat: l,
                    value: None,
                    error_estimate: None,
                    degraded: true,
                    failure: Some(e.to_string()),
                },
            }
        })
        .collect();
    let source = tol.provenance();
    SweepTable {
        quantity,
        unit: quantity.unit().to_string(),
        beta_grid,
        lambda_list,
        rows,
        provenance: Provenance {
            artifact: ARTIFACT.to_string(),
            tolerance: tol.value,
            tolerance_source: source,
            truncation: TRUNCATION.to_string(),
        },
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_value).unwrap_or_default()
}

impl SweepTable {
    pub fn write(
        &self,
        format: OutputFormat,
        out: &mut dyn Write,
    ) -> std::result::Result<(), CliError> {
        match format {
            OutputFormat::Csv => self.write_csv(out)?,
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let p = &self.provenance;
        writeln!(out, "# {}", p.artifact)?;
        writeln!(out, "# quantity = {} [{}]", self.quantity.name(), self.unit)?;
        writeln!(out, "# {}", p.tolerance_source)?;
        writeln!(out, "# truncation: {}", p.truncation)?;
        for r in self.rows.iter().filter(|r| r.degraded) {
            let why = r
                .failure
                .as_deref()
                .unwrap_or("error estimate above tolerance");
            writeln!(
                out,
                "# degraded beta = {}, lambda_hat = {}: {why}",
                r.beta, r.lambda_hat
            )?;
        }
        writeln!(out, "beta,lambda_hat,value,error_estimate")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                r.beta,
                r.lambda_hat,
                opt(r.value),
                opt(r.error_estimate)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::TolSource;
    use super::*;

    fn tol(v: f64) -> Tolerance {
        Tolerance {
            value: v,
            source: TolSource::Default,
        }
    }

    #[test]
    fn grid_forms() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0.1, 0.2").unwrap(), vec![0.1, 0.2]);
        assert_eq!(parse_grid("-0.5:0.5:1").unwrap(), vec![-0.5]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:x").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert_eq!(parse_list("inf,2").unwrap(), vec![f64::INFINITY, 2.0]);
    }

    #[test]
    fn default_grid_spacing() {
        let g = parse_grid("0:0.95:20").unwrap();
        assert_eq!(g.len(), 20);
        assert!((g[1] - 0.05).abs() < 1e-15 && g[19] == 0.95);
    }

    #[test]
    fn rows_are_lexicographic() {
        let t = run_sweep(Quantity::Ellzp, &[0.5, 0.0], &[10.0, 2.0], &tol(1e-8));
        let keys: Vec<(f64, f64)> = t.rows.iter().map(|r| (r.lambda_hat, r.beta)).collect();
        assert_eq!(keys, vec![(2.0, 0.0), (2.0, 0.5), (10.0, 0.0), (10.0, 0.5)]);
        assert_eq!(t.rows[0].value, Some(0.0));
    }

    #[test]
    fn failures_are_recorded_per_row() {
        let t = run_sweep(Quantity::Energy, &[0.0, 1.5], &[1.0], &tol(1e-8));
        assert!(t.rows[0].value.is_some());
        assert!(t.rows[1].value.is_none() && t.rows[1].failure.is_some());
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("1.5,1,,"));
        assert!(s.contains("# degraded beta = 1.5"));
    }

    #[test]
    fn output_is_deterministic() {
        let render = |f| {
            let t = run_sweep(Quantity::Energy, &[0.0, 0.3, 0.6], &[0.5, 5.0], &tol(1e-8));
            let mut buf = Vec::new();
            t.write(f, &mut buf).unwrap();
            buf
        };
        assert_eq!(render(OutputFormat::Csv), render(OutputFormat::Csv));
        assert_eq!(render(OutputFormat::Json), render(OutputFormat::Json));
    }

    #[test]
    fn json_keeps_infinite_coupling() {
        let t = run_sweep(Quantity::Ellzp, &[0.5], &[f64::INFINITY], &tol(1e-8));
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.contains("\"lambda_hat\":\"inf\""));
        let back: SweepTable = serde_json::from_str(&s).unwrap();
        assert_eq!(back.rows[0].lambda_hat, f64::INFINITY);
        assert_eq!(back.rows[0].value, Some(-0.5 / 24.0));
    }

    #[test]
    fn json_round_trip() {
        let t = run_sweep(Quantity::Ellzp, &[0.2], &[1.0, 3.0], &tol(1e-8));
        let s = serde_json::to_string(&t).unwrap();
        let back: SweepTable = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
