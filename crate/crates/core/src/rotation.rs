//! Zero-point angular momentum, moments of inertia, their bounds, and the
//! Legendre transform to the stationary frame.
//!
//! All quantities are dimensionless: angular momentum in ħ, inertia in
//! ħR/c, energy in ħc/R. The rotation speed β plays the role of Ω.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::casimir_energy_corotating;
use crate::error::{Error, Result};
use crate::numerics::{
    derivative_with, integrate_with_tail, refine_root, second_derivative_with, Bracket,
    DiffOptions, Estimate,
};
use crate::params::ModelPoint;

/// |ℓ_ZP| and −I_ZP never exceed this value.
pub const ONE_24TH: f64 = 1.0 / 24.0;

/// Tolerance for the ℓ_ZP quadratures feeding a numerical derivative.
const INNER_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularLedger {
    pub point: ModelPoint,
    pub inertia_hat: f64,
    pub field_energy: Estimate,
    pub ell_zp: Estimate,
    /// Îβ + ℓ_ZP.
    pub ell_total: Estimate,
    pub inertia_zp: Estimate,
    /// Î + I_ZP.
    pub inertia_total: Estimate,
    pub stationary_energy: Estimate,
}

/// ℓ_ZP integrand with numerator and denominator both scaled by e^{−2πξ}.
pub fn ell_zp_integrand(xi: f64, point: &ModelPoint) -> f64 {
    let b = point.beta;
    if b == 0.0 {
        return 0.0;
    }
    let e4 = (-4.0 * PI * xi).exp();
    let one_e4 = -(-4.0 * PI * xi).exp_m1();
    if point.is_dirichlet() {
        return 4.0 * b * xi * e4 / one_e4;
    }
    let l = point.lambda_hat;
    let g = 1.0 - b * b;
    let xp = 2.0 * PI * xi * (1.0 + b);
    let xm = 2.0 * PI * xi * (1.0 - b);
    // The bracket vanishes at ξ = 0. Near there the expm1 form avoids the
    // O(1) cancellation; once the slowest exponential has decayed the plain
    // form has the smaller rounding error.
    let (lo, hi) = (xp.min(xm), 4.0 * PI * xi);
    let bracket = if (-lo).exp() < hi.min(1.0) {
        (1.0 + b).powi(2) * (-xp).exp() - (1.0 - b).powi(2) * (-xm).exp() - 4.0 * b * e4
    } else {
        (1.0 + b).powi(2) * (-xp).exp_m1()
            - (1.0 - b).powi(2) * (-xm).exp_m1()
            - 4.0 * b * (-4.0 * PI * xi).exp_m1()
    };
    let num = xi * g * bracket + 2.0 * b * l * e4;
    let den = 0.5 * l * one_e4 + xi * g * (-(-xp).exp_m1()) * (-(-xm).exp_m1());
    xi * num / den
}

/// Bound on |∫_Z^∞ ell_zp_integrand|. Every exponential in the numerator
/// decays at least like e^{−2π(1−|β|)ξ}, and each denominator term alone
/// bounds it from below.
fn ell_tail_bound(z: f64, point: &ModelPoint) -> f64 {
    let b = point.beta.abs();
    let c = 2.0 * PI * (1.0 - b);
    let s = -(-c * z).exp_m1();
    let k = 2.0 * (1.0 + b).powi(2);
    let first = k / (s * s) * (-c * z).exp() * (z / c + 1.0 / (c * c));
    if point.lambda_hat == 0.0 {
        return first;
    }
    let c4 = 4.0 * PI;
    let s4 = -(-c4 * z).exp_m1();
    first + 4.0 * b / s4 * (-c4 * z).exp() * (z / c4 + 1.0 / (c4 * c4))
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            "tol",
            format!("must be finite and > 0, got {tol}"),
        ))
    }
}

fn check_inertia(inertia_hat: f64) -> Result<()> {
    if inertia_hat >= 0.0 && inertia_hat.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            "inertia_hat",
            format!("must be finite and >= 0, got {inertia_hat}"),
        ))
    }
}

fn check_lambda(lambda_hat: f64) -> Result<()> {
    ModelPoint::new(0.0, lambda_hat).map(|_| ())
}

/// Zero-point angular momentum ℓ_ZP, in ħ.
pub fn ell_zp(point: &ModelPoint, tol: f64) -> Result<Estimate> {
    point.require_subluminal()?;
    check_tol(tol)?;
    if point.beta == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    if point.is_dirichlet() {
        return Ok(Estimate::exact(-point.beta * ONE_24TH));
    }
    let (res, _) = integrate_with_tail(
        |x| ell_zp_integrand(x, point),
        |z| ell_tail_bound(z, point),
        1.0,
        tol,
    )?;
    Ok(Estimate {
        value: -res.value,
        error: res.error_estimate,
    })
}

fn diff_step(beta: f64, cap: f64) -> Result<f64> {
    let margin = 1.0 - beta.abs();
    if margin < 1e-6 {
        return Err(Error::domain(
            "beta",
            format!("differentiation stencil at beta = {beta} would cross |beta| = 1"),
        ));
    }
    Ok(cap.min(margin / 10.0))
}

/// Zero-point moment of inertia I_ZP = dℓ_ZP/dβ, in ħR/c.
pub fn inertia_zp(point: &ModelPoint, tol: f64) -> Result<Estimate> {
    point.require_subluminal()?;
    check_tol(tol)?;
    if point.is_dirichlet() {
        return Ok(Estimate::exact(-ONE_24TH));
    }
    let h = diff_step(point.beta, 1e-3)?;
    let l = point.lambda_hat;
    let d = derivative_with(
        |b| Ok(ell_zp(&ModelPoint::new(b, l)?, INNER_TOL)?.value),
        point.beta,
        &DiffOptions::new(h, tol).within(-1.0, 1.0),
    )?;
    Ok(Estimate {
        value: d.value,
        error: d.error_estimate,
    })
}

/// I_ZP by the independent route −∂²E_c/∂β².
pub fn inertia_zp_from_energy(point: &ModelPoint, tol: f64) -> Result<Estimate> {
    point.require_subluminal()?;
    check_tol(tol)?;
    if point.is_dirichlet() {
        return Ok(Estimate::exact(-ONE_24TH));
    }
    let h = diff_step(point.beta, 1e-2)?;
    let l = point.lambda_hat;
    let d = second_derivative_with(
        |b| Ok(casimir_energy_corotating(&ModelPoint::new(b, l)?, INNER_TOL)?.field_energy),
        point.beta,
        &DiffOptions::new(h, tol).within(-1.0, 1.0),
    )?;
    Ok(Estimate {
        value: -d.value,
        error: d.error_estimate,
    })
}

/// ℓ_ZP by the independent route −∂E_c/∂β.
pub fn ell_zp_from_energy(point: &ModelPoint, tol: f64) -> Result<Estimate> {
    point.require_subluminal()?;
    check_tol(tol)?;
    let h = diff_step(point.beta, 1e-2)?;
    let l = point.lambda_hat;
    let d = derivative_with(
        |b| Ok(casimir_energy_corotating(&ModelPoint::new(b, l)?, INNER_TOL)?.field_energy),
        point.beta,
        &DiffOptions::new(h, tol).within(-1.0, 1.0),
    )?;
    Ok(Estimate {
        value: -d.value,
        error: d.error_estimate,
    })
}

/// Lower bound on I_ZP reached at the light-speed boundary, in ħR/c.
pub fn izp_lightspeed_bound(lambda_hat: f64, tol: f64) -> Result<Estimate> {
    check_lambda(lambda_hat)?;
    check_tol(tol)?;
    if lambda_hat == 0.0 || lambda_hat.is_infinite() {
        return Ok(Estimate::exact(-ONE_24TH));
    }
    let l = lambda_hat;
    let f = |x: f64| {
        let d = l + 2.0 * x * -(-PI * x).exp_m1();
        6.0 * l * x * x * (-PI * x).exp() / (d * d)
    };
    // (λ̂ + 2ξs)² ≥ 8λ̂ξs
    let tail = |z: f64| {
        let s = -(-PI * z).exp_m1();
        0.75 / s * (-PI * z).exp() * (z / PI + 1.0 / (PI * PI))
    };
    let (res, _) = integrate_with_tail(f, tail, 1.0, 24.0 * tol)?;
    Ok(Estimate {
        value: -ONE_24TH * (1.0 - res.value),
        error: ONE_24TH * res.error_estimate,
    })
}

/// Upper bound on |ℓ_ZP| over |β| ≤ 1, in ħ.
pub fn ell_zp_bound(lambda_hat: f64, tol: f64) -> Result<Estimate> {
    check_lambda(lambda_hat)?;
    check_tol(tol)?;
    if lambda_hat.is_infinite() {
        return Ok(Estimate::exact(ONE_24TH));
    }
    let l = lambda_hat;
    let f = |x: f64| 12.0 * x * x * (-PI * x).exp() / (l - 2.0 * x * (-PI * x).exp_m1());
    let tail = |z: f64| {
        let s = -(-PI * z).exp_m1();
        6.0 / s * (-PI * z).exp() * (z / PI + 1.0 / (PI * PI))
    };
    let (res, _) = integrate_with_tail(f, tail, 1.0, 24.0 * tol)?;
    let value = (ONE_24TH * (1.0 - res.value)).max(0.0);
    Ok(Estimate {
        value,
        error: ONE_24TH * res.error_estimate,
    })
}

/// ℓ_total = Îβ + ℓ_ZP, in ħ.
pub fn total_angular_momentum(point: &ModelPoint, inertia_hat: f64, tol: f64) -> Result<Estimate> {
    check_inertia(inertia_hat)?;
    let l = ell_zp(point, tol)?;
    Ok(Estimate {
        value: inertia_hat * point.beta + l.value,
        error: l.error,
    })
}

/// Stationary-frame energy E_s = E_c − Îβ²/2 + ℓ_total·β, in ħc/R.
pub fn stationary_energy(point: &ModelPoint, inertia_hat: f64, tol: f64) -> Result<Estimate> {
    check_inertia(inertia_hat)?;
    let e = casimir_energy_corotating(point, 0.5 * tol)?;
    let l = ell_zp(point, 0.5 * tol)?;
    let b = point.beta;
    Ok(Estimate {
        value: e.field_energy + 0.5 * inertia_hat * b * b + l.value * b,
        error: e.quadrature_error + l.error * b.abs(),
    })
}

pub fn angular_ledger(point: &ModelPoint, inertia_hat: f64, tol: f64) -> Result<AngularLedger> {
    check_inertia(inertia_hat)?;
    let e = casimir_energy_corotating(point, tol)?;
    let l = ell_zp(point, tol)?;
    let i = inertia_zp(point, tol)?;
    let b = point.beta;
    Ok(AngularLedger {
        point: *point,
        inertia_hat,
        field_energy: Estimate {
            value: e.field_energy,
            error: e.quadrature_error,
        },
        ell_zp: l,
        ell_total: Estimate {
            value: inertia_hat * b + l.value,
            error: l.error,
        },
        inertia_zp: i,
        inertia_total: Estimate {
            value: inertia_hat + i.value,
            error: i.error,
        },
        stationary_energy: Estimate {
            value: e.field_energy + 0.5 * inertia_hat * b * b + l.value * b,
            error: e.quadrature_error + l.error * b.abs(),
        },
    })
}

/// Samples used to confirm ℓ(β) is increasing before inverting it.
const MONOTONE_SAMPLES: usize = 17;
/// Deepest bracket 1 − 2^{−k} tried when ℓ_total is close to its supremum.
const MAX_BRACKET_DEPTH: i32 = 24;

/// The rotation speed β at which Îβ + ℓ_ZP(β) = ℓ_total.
///
/// ℓ(β) is checked to be strictly increasing on the search bracket first;
/// a violation is reported as [`Error::ModelViolation`].
pub fn omega_of_ell(ell_total: f64, lambda_hat: f64, inertia_hat: f64, tol: f64) -> Result<f64> {
    check_lambda(lambda_hat)?;
    check_inertia(inertia_hat)?;
    check_tol(tol)?;
    if !ell_total.is_finite() {
        return Err(Error::domain(
            "ell",
            format!("must be finite, got {ell_total}"),
        ));
    }
    if lambda_hat.is_infinite() {
        let slope = inertia_hat - ONE_24TH;
        if slope <= 0.0 {
            return Err(Error::ModelViolation(format!(
                "l(beta) = (I - 1/24) beta is not increasing for I = {inertia_hat}"
            )));
        }
        let beta = ell_total / slope;
        if beta.abs() >= 1.0 {
            return Err(out_of_range(ell_total, slope));
        }
        return Ok(beta);
    }

    let ell = |b: f64| -> Result<f64> {
        Ok(inertia_hat * b + ell_zp(&ModelPoint::new(b, lambda_hat)?, INNER_TOL)?.value)
    };

    // expand the bracket toward |β| = 1 until it covers the target
    let target = ell_total.abs();
    let mut edge = 0.5;
    let mut ell_edge = ell(edge)?;
    let mut k = 1;
    while ell_edge <= target && k < MAX_BRACKET_DEPTH {
        k += 1;
        edge = 1.0 - 0.5f64.powi(k);
        ell_edge = ell(edge)?;
    }

    let samples: Vec<f64> = (0..MONOTONE_SAMPLES)
        .map(|j| -edge + 2.0 * edge * j as f64 / (MONOTONE_SAMPLES - 1) as f64)
        .collect();
    let values = samples
        .par_iter()
        .map(|&b| ell(b))
        .collect::<Result<Vec<f64>>>()?;
    if let Some(w) = values.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::ModelViolation(format!(
            "l(beta) is not increasing between beta = {} and {} (l = {} and {}); \
             total inertia is not positive",
            samples[w],
            samples[w + 1],
            values[w],
            values[w + 1]
        )));
    }
    if ell_edge <= target {
        let sup = ell_zp_bound(lambda_hat, INNER_TOL).map(|b| inertia_hat - b.value)?;
        return Err(out_of_range(ell_total, sup));
    }
    if ell_total == 0.0 {
        return Ok(0.0);
    }

    let f = |b: f64| ell(b).map(|v| v - ell_total).unwrap_or(f64::NAN);
    let bracket = Bracket::new(f, -edge, edge)?;
    refine_root(f, &bracket, tol.min(1e-12))
}

fn out_of_range(ell: f64, sup: f64) -> Error {
    Error::domain(
        "ell",
        format!(
            "|l| = {} is outside the attainable range |l| < {sup}",
            ell.abs()
        ),
    )
}

/// Total inertia at β extrapolated from a measurement at β₀, in ħR/c.
pub fn renormalized_inertia(
    beta: f64,
    beta0: f64,
    lambda_hat: f64,
    measured_total_at_beta0: f64,
    tol: f64,
) -> Result<Estimate> {
    let p = ModelPoint::new(beta, lambda_hat)?;
    let p0 = ModelPoint::new(beta0, lambda_hat)?;
    if beta == beta0 || p.is_dirichlet() {
        return Ok(Estimate::exact(measured_total_at_beta0));
    }
    let i = inertia_zp(&p, 0.5 * tol)?;
    let i0 = inertia_zp(&p0, 0.5 * tol)?;
    Ok(Estimate {
        value: measured_total_at_beta0 + i.value - i0.value,
        error: i.error + i0.error,
    })
}

/// As [`renormalized_inertia`] with the reference taken at the light-speed
/// boundary, where I_ZP equals [`izp_lightspeed_bound`]. The correction
/// added to the measurement is never negative.
pub fn renormalized_inertia_from_light_speed(
    beta: f64,
    lambda_hat: f64,
    measured_total_at_light_speed: f64,
    tol: f64,
) -> Result<Estimate> {
    let p = ModelPoint::new(beta, lambda_hat)?;
    let i = inertia_zp(&p, 0.5 * tol)?;
    let i1 = izp_lightspeed_bound(lambda_hat, 0.5 * tol)?;
    Ok(Estimate {
        value: measured_total_at_light_speed + i.value - i1.value,
        error: i.error + i1.error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundStateVerdict {
    /// Total inertia positive on the whole grid.
    NonRotating,
    /// No classical inertia and no coupling: total inertia vanishes.
    Degenerate,
    /// Total inertia is not positive somewhere on the grid.
    OutsideValidity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateReport {
    pub lambda_hat: f64,
    pub inertia_hat: f64,
    pub beta_grid: Vec<f64>,
    /// Î + I_ZP(β) on the grid; NaN where the evaluation failed.
    pub inertia_total: Vec<f64>,
    pub min_inertia_total: f64,
    pub argmin_beta: f64,
    pub ell_zp_bound: f64,
    /// Lower bound 1 − ℓ_ZP bound on I·Δβ/Δℓ for Δℓ of one quantum.
    pub response_lower_bound: f64,
    /// Whether the response bound is at least 1 − 1/24.
    pub inequality_holds: bool,
    pub verdict: GroundStateVerdict,
    pub failures: Vec<String>,
}

/// 41 uniform points on [−0.95, 0.95].
pub fn default_beta_grid() -> Vec<f64> {
    (0..41).map(|i| -0.95 + 0.0475 * i as f64).collect()
}

/// Evaluates total inertia over `beta_grid` and classifies the ground
/// state. Failures at individual points are recorded, not raised.
pub fn ground_state_report(
    lambda_hat: f64,
    inertia_hat: f64,
    beta_grid: &[f64],
    tol: f64,
) -> GroundStateReport {
    let results: Vec<Result<f64>> = beta_grid
        .par_iter()
        .map(|&b| {
            check_inertia(inertia_hat)?;
            let p = ModelPoint::new(b, lambda_hat)?;
            Ok(inertia_hat + inertia_zp(&p, tol)?.value)
        })
        .collect();
    let mut failures = Vec::new();
    let mut inertia_total = Vec::with_capacity(results.len());
    for (b, r) in beta_grid.iter().zip(results) {
        match r {
            Ok(v) => inertia_total.push(v),
            Err(e) => {
                failures.push(format!("beta = {b}: {e}"));
                inertia_total.push(f64::NAN);
            }
        }
    }
    let (argmin_beta, min_inertia_total) = beta_grid
        .iter()
        .zip(&inertia_total)
        .filter(|(_, v)| !v.is_nan())
        .fold((f64::NAN, f64::INFINITY), |acc, (&b, &v)| {
            if v < acc.1 {
                (b, v)
            } else {
                acc
            }
        });
    let bound = match ell_zp_bound(lambda_hat, tol.min(1e-10)) {
        Ok(b) => b.value,
        Err(e) => {
            failures.push(format!("l_ZP bound: {e}"));
            f64::NAN
        }
    };
    let response_lower_bound = 1.0 - bound;
    let verdict = if failures.is_empty() && min_inertia_total > 0.0 && !beta_grid.is_empty() {
        GroundStateVerdict::NonRotating
    } else if inertia_hat == 0.0 && lambda_hat == 0.0 {
        GroundStateVerdict::Degenerate
    } else {
        GroundStateVerdict::OutsideValidity
    };
    GroundStateReport {
        lambda_hat,
        inertia_hat,
        beta_grid: beta_grid.to_vec(),
        inertia_total,
        min_inertia_total,
        argmin_beta,
        ell_zp_bound: bound,
        response_lower_bound,
        inequality_holds: response_lower_bound >= 1.0 - ONE_24TH - 1e-12,
        verdict,
        failures,
    }
}
