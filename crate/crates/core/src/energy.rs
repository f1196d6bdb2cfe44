//! Co-rotating Casimir energy of the ring.
//!
//! The field energy is a single integral along the imaginary frequency axis,
//!
//! ```text
//! E_c = (1/2π) ∫₀^∞ dζ ln(1 − [4ζ cosh(2πζβ/(1−β²)) + (λ̂−2ζ)e^{−2πζ/(1−β²)}]
//!                              / [(2ζ+λ̂) e^{2πζ/(1−β²)}])
//! ```
//!
//! in units of ħc/R. With p = e^{−2πζ/(1+β)} and q = e^{−2πζ/(1−β)} the
//! argument of the logarithm factors as
//! [2ζ(1−p)(1−q) + λ̂(1−pq)] / (2ζ+λ̂), which is evaluated through `expm1`
//! near ζ = 0 and as `ln_1p` of a small correction at large ζ.

use std::cell::Cell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::integrate_with_tail;
use crate::params::ModelPoint;

/// Width of the band above 1 in which a log argument is clamped instead of
/// rejected.
pub const GUARD_BAND: f64 = 1e-12;
const CLAMPED_ARGUMENT: f64 = 1.0 - 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult {
    pub point: ModelPoint,
    /// Casimir energy of the field, ħc/R.
    pub field_energy: f64,
    /// −Îβ²/2, ħc/R.
    pub classical_term: f64,
    pub total: f64,
    pub quadrature_error: f64,
    /// Integrand evaluations whose log argument fell in the guard band.
    pub guard_clamps: usize,
    /// Upper limit of the numerical integral; the remainder is bounded
    /// analytically and included in `quadrature_error`.
    pub cutoff: f64,
}

/// −1/12: field energy without coupling, for any rim speed.
pub fn casimir_limit_free(_beta: f64) -> f64 {
    -1.0 / 12.0
}

/// −(1−β²)/48: field energy with Dirichlet walls.
pub fn casimir_limit_dirichlet(beta: f64) -> f64 {
    -(1.0 - beta * beta) / 48.0
}

/// Small part t of the log argument 1 − t, and the argument itself, each
/// computed without cancellation.
fn log_argument_parts(zeta: f64, point: &ModelPoint) -> (f64, f64) {
    let b = point.beta;
    let xp = 2.0 * PI * zeta / (1.0 + b);
    let xq = 2.0 * PI * zeta / (1.0 - b);
    let (one_p, one_q) = (-(-xp).exp_m1(), -(-xq).exp_m1());
    let pq = (-(xp + xq)).exp();
    let one_pq = -(-(xp + xq)).exp_m1();
    if point.is_dirichlet() {
        return (pq, one_pq);
    }
    let l = point.lambda_hat;
    let denom = 2.0 * zeta + l;
    // 1 − (1−p)(1−q) = p + q(1−p), free of cancellation
    let small = (2.0 * zeta * ((-xp).exp() + (-xq).exp() * one_p) + l * pq) / denom;
    let arg = (2.0 * zeta * one_p * one_q + l * one_pq) / denom;
    (small, arg)
}

fn integrand_guarded(zeta: f64, point: &ModelPoint, clamps: &Cell<usize>) -> f64 {
    if point.lambda_hat == 0.0 {
        // both factors separately so tiny ζ cannot underflow the product
        let b = point.beta;
        let a = -(-2.0 * PI * zeta / (1.0 + b)).exp_m1();
        let c = -(-2.0 * PI * zeta / (1.0 - b)).exp_m1();
        return log_one_minus(1.0 - a, a) + log_one_minus(1.0 - c, c);
    }
    let (t, arg) = log_argument_parts(zeta, point);
    if t == 0.0 {
        return 0.0;
    }
    if t > 0.0 && arg > 0.0 {
        return log_one_minus(t, arg);
    }
    if (1.0..=1.0 + GUARD_BAND).contains(&arg) {
        clamps.set(clamps.get() + 1);
        return CLAMPED_ARGUMENT.ln();
    }
    f64::NAN
}

/// ln(1 − t) given both t and 1 − t, choosing whichever is accurate.
fn log_one_minus(t: f64, one_minus_t: f64) -> f64 {
    if t < 0.5 {
        (-t).ln_1p()
    } else {
        one_minus_t.ln()
    }
}

/// The logarithm under the energy integral at imaginary frequency ζ > 0.
/// NaN means the argument left (0, 1) by more than rounding.
pub fn casimir_integrand(zeta: f64, point: &ModelPoint) -> f64 {
    integrand_guarded(zeta, point, &Cell::new(0))
}

/// Bound on |∫_Z^∞ integrand dζ|: the argument deficit t is at most
/// p + q ≤ 2e^{−cζ} with c = 2π/(1+|β|), and |ln(1−t)| ≤ t/(1−t).
fn tail_bound(z: f64, beta: f64) -> f64 {
    let c = 2.0 * PI / (1.0 + beta.abs());
    let t = 2.0 * (-c * z).exp();
    if t >= 1.0 {
        return f64::INFINITY;
    }
    t / (c * (1.0 - t))
}

/// Field energy in the co-rotating frame, ħc/R, with absolute error ≤ `tol`.
pub fn casimir_energy_corotating(point: &ModelPoint, tol: f64) -> Result<EnergyResult> {
    point.require_subluminal()?;
    if !(tol > 0.0) {
        return Err(Error::domain("tol", format!("must be > 0, got {tol}")));
    }
    if point.is_dirichlet() {
        let e = casimir_limit_dirichlet(point.beta);
        return Ok(EnergyResult {
            point: *point,
            field_energy: e,
            classical_term: 0.0,
            total: e,
            quadrature_error: 0.0,
            guard_clamps: 0,
            cutoff: f64::INFINITY,
        });
    }
    let clamps = Cell::new(0usize);
    let scale = 1.0 / (2.0 * PI);
    let (res, cutoff) = integrate_with_tail(
        |z| integrand_guarded(z, point, &clamps),
        |z| tail_bound(z, point.beta),
        1.0,
        tol / scale,
    )?;
    let err = res.error_estimate * scale;
    if err > tol {
        return Err(Error::NonConvergence {
            what: "Casimir energy integral",
            detail: format!("error estimate {err:e} exceeds tolerance {tol:e}"),
        });
    }
    let e = res.value * scale;
    Ok(EnergyResult {
        point: *point,
        field_energy: e,
        classical_term: 0.0,
        total: e,
        quadrature_error: err,
        guard_clamps: clamps.get(),
        cutoff,
    })
}

/// Field energy plus the classical rotational term −Îβ²/2.
pub fn corotating_total_energy(
    point: &ModelPoint,
    inertia_hat: f64,
    tol: f64,
) -> Result<EnergyResult> {
    if !(inertia_hat >= 0.0) || !inertia_hat.is_finite() {
        return Err(Error::domain(
            "inertia_hat",
            format!("must be finite and >= 0, got {inertia_hat}"),
        ));
    }
    let mut r = casimir_energy_corotating(point, tol)?;
    r.classical_term = -0.5 * inertia_hat * point.beta * point.beta;
    r.total = r.field_energy + r.classical_term;
    Ok(r)
}
