//! Double-exponential quadrature for integrals over (0, ∞) and finite
//! intervals, plus composite Gauss–Legendre for smooth integrands.
//!
//! The tanh-sinh rule clusters abscissae double-exponentially towards both
//! endpoints, so integrable endpoint singularities of logarithmic or
//! algebraic type need no special handling. Abscissae are generated from
//! their distance to the nearest endpoint to avoid rounding them onto it.

use std::f64::consts::FRAC_PI_2;
use std::ops::{AddAssign, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Value of a quadrature with an error estimate the routine commits to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Half-width of the sampled window in the transformed variable.
const T_MAX: f64 = 4.0;
/// Exp-sinh needs a wider window on the small-x side for log singularities.
const T_MIN_EXP_SINH: f64 = -4.5;
const MAX_LEVEL: usize = 12;
const MIN_LEVEL: usize = 3;

fn check(what: &'static str, x: f64, fx: f64) -> Result<f64> {
    if fx.is_finite() {
        Ok(fx)
    } else {
        Err(Error::NonFinite { what, at: x })
    }
}

/// One tanh-sinh node: distance of the abscissa from the endpoint it is
/// closest to (in units of the half-width), and its weight.
fn tanh_sinh_node(t: f64) -> (f64, f64) {
    let u = FRAC_PI_2 * t.sinh();
    let e = (-2.0 * u.abs()).exp();
    // 1 - tanh|u| = 2e / (1 + e),  1 / cosh²u = 4e / (1 + e)²
    let dist = 2.0 * e / (1.0 + e);
    let weight = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
    (dist, weight)
}

/// Tanh-sinh quadrature of `f` over the finite interval [a, b].
///
/// Levels halve the step until two successive estimates agree to `tol`;
/// the reported error is that last difference, floored by the accumulated
/// rounding of the weighted sum.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::domain(
            "interval",
            format!("need finite a < b, got [{a}, {b}]"),
        ));
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut evaluations = 0usize;

    // Sum of w·f over nodes t = k·h for the given parity of k (all k when step = 1).
    let mut sample = |h: f64, start: i64, stride: i64| -> Result<(f64, f64)> {
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        let kmax = (T_MAX / h).floor() as i64;
        let mut k = start;
        while k <= kmax {
            let t = k as f64 * h;
            if k == 0 {
                let fx = check("tanh-sinh integrand", mid, f(mid))?;
                evaluations += 1;
                sum += FRAC_PI_2 * fx;
                abs_sum += FRAC_PI_2 * fx.abs();
            } else {
                let (dist, w) = tanh_sinh_node(t);
                let off = half * dist;
                for x in [a + off, b - off] {
                    if x <= a || x >= b {
                        continue;
                    }
                    let fx = check("tanh-sinh integrand", x, f(x))?;
                    evaluations += 1;
                    sum += w * fx;
                    abs_sum += w * fx.abs();
                }
            }
            k += stride;
        }
        Ok((sum, abs_sum))
    };

    let mut h = 1.0;
    let (mut sum, mut abs_sum) = sample(h, 0, 1)?;
    let mut estimate = sum * h * half;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let (s, a_s) = sample(h, 1, 2)?;
        sum += s;
        abs_sum += a_s;
        let next = sum * h * half;
        let diff = (next - estimate).abs();
        let floor = 32.0 * f64::EPSILON * abs_sum * h * half;
        estimate = next;
        if level >= MIN_LEVEL && diff <= tol.max(floor) {
            return Ok(QuadratureResult {
                value: estimate,
                error_estimate: diff.max(floor),
                evaluations,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "tanh-sinh quadrature",
        detail: format!("tolerance {tol:e} not met after {evaluations} evaluations"),
    })
}

/// Exp-sinh quadrature of `f` over (0, ∞).
///
/// Suitable for integrands with an integrable singularity at 0 that decay at
/// least exponentially. The substitution x = exp(π/2·sinh t) maps both ends
/// double-exponentially.
pub fn integrate_semi_infinite<F>(f: F, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    let mut evaluations = 0usize;
    let mut sample = |h: f64, start: i64, stride: i64| -> Result<(f64, f64)> {
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        let kmin = (T_MIN_EXP_SINH / h).ceil() as i64;
        let kmax = (T_MAX / h).floor() as i64;
        // first index >= kmin with the requested parity
        let mut k = kmin;
        if stride == 2 && (k - start).rem_euclid(2) != 0 {
            k += 1;
        }
        while k <= kmax {
            let t = k as f64 * h;
            let x = (FRAC_PI_2 * t.sinh()).exp();
            if x > 0.0 && x.is_finite() {
                let fx = check("exp-sinh integrand", x, f(x))?;
                evaluations += 1;
                let w = FRAC_PI_2 * t.cosh() * x;
                let term = w * fx;
                if term.is_finite() {
                    sum += term;
                    abs_sum += term.abs();
                }
            }
            k += stride;
        }
        Ok((sum, abs_sum))
    };

    let mut h = 1.0;
    let (mut sum, mut abs_sum) = sample(h, 0, 1)?;
    let mut estimate = sum * h;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let (s, a_s) = sample(h, 1, 2)?;
        sum += s;
        abs_sum += a_s;
        let next = sum * h;
        let diff = (next - estimate).abs();
        let floor = 32.0 * f64::EPSILON * abs_sum * h;
        estimate = next;
        if level >= MIN_LEVEL && diff <= tol.max(floor) {
            return Ok(QuadratureResult {
                value: estimate,
                error_estimate: diff.max(floor),
                evaluations,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "exp-sinh quadrature",
        detail: format!("tolerance {tol:e} not met after {evaluations} evaluations"),
    })
}

/// Integral over (0, ∞) split as tanh-sinh on (0, Z] plus an analytic bound
/// on the discarded tail.
///
/// `tail_bound(Z)` must bound |∫_Z^∞ f| from above and decrease with Z. The
/// cutoff is the smallest doubling of `initial_cutoff` for which the bound
/// falls below a tenth of `tol`; the bound is added to the error estimate.
pub fn integrate_with_tail<F, T>(
    f: F,
    tail_bound: T,
    initial_cutoff: f64,
    tol: f64,
) -> Result<(QuadratureResult, f64)>
where
    F: Fn(f64) -> f64,
    T: Fn(f64) -> f64,
{
    let cutoff = tail_cutoff(&tail_bound, initial_cutoff, 0.1 * tol)?;
    let tail = tail_bound(cutoff);
    let mut res = integrate_panels(f, initial_cutoff, cutoff, 0.5 * tol)?;
    res.error_estimate += tail;
    Ok((res, cutoff))
}

/// Tanh-sinh over (0, Z] on the panels [0, z₀], [z₀, 2z₀], [2z₀, 4z₀], ….
/// Geometric panels resolve integrands with several decay scales; the
/// tolerance is shared equally between them.
pub fn integrate_panels<F>(
    f: F,
    first_panel: f64,
    cutoff: f64,
    tol: f64,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    if !(first_panel > 0.0) || !(cutoff > 0.0) || !cutoff.is_finite() {
        return Err(Error::domain(
            "cutoff",
            format!("need 0 < first panel and finite cutoff, got {first_panel}, {cutoff}"),
        ));
    }
    let mut edges = vec![0.0, first_panel.min(cutoff)];
    while *edges.last().unwrap() < cutoff {
        let next = (2.0 * edges.last().unwrap()).min(cutoff);
        edges.push(next);
    }
    let share = tol / (edges.len() - 1) as f64;
    let mut total = QuadratureResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
    };
    for w in edges.windows(2) {
        let r = integrate_interval(&f, w[0], w[1], share)?;
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.evaluations += r.evaluations;
    }
    Ok(total)
}

/// Smallest Z = initial·2^k with `tail_bound(Z) <= target`.
pub fn tail_cutoff<T: Fn(f64) -> f64>(tail_bound: &T, initial: f64, target: f64) -> Result<f64> {
    let mut z = initial.max(f64::MIN_POSITIVE);
    for _ in 0..64 {
        let b = tail_bound(z);
        if b.is_finite() && b <= target {
            return Ok(z);
        }
        z *= 2.0;
    }
    Err(Error::NonConvergence {
        what: "tail truncation",
        detail: format!("tail bound never fell below {target:e}"),
    })
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre quadrature of a smooth integrand over [a, b]
/// with `panels` equal panels of `order` nodes each. Generic over the value
/// type so complex integrands work unchanged.
pub fn gauss_legendre_composite<T, F>(f: F, a: f64, b: f64, panels: usize, order: usize) -> T
where
    T: Copy + Default + AddAssign + Mul<f64, Output = T>,
    F: Fn(f64) -> T,
{
    let (nodes, weights) = gauss_legendre(order);
    let width = (b - a) / panels as f64;
    let mut total = T::default();
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let c = lo + 0.5 * width;
        for (x, w) in nodes.iter().zip(&weights) {
            total += f(c + 0.5 * width * x) * (w * 0.5 * width);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// ln(1 − e^{−y}) accurate on both sides of y = ln 2.
    fn log1mexp(y: f64) -> f64 {
        if y < std::f64::consts::LN_2 {
            (-(-y).exp_m1()).ln()
        } else {
            (-(-y).exp()).ln_1p()
        }
    }

    #[test]
    fn log_singular_semi_infinite() {
        // ∫₀^∞ ln(1 − e^{−ax}) dx = −π²/(6a), a = 2π
        let r = integrate_semi_infinite(|x| log1mexp(2.0 * PI * x), 1e-10).unwrap();
        assert!((r.value + PI / 12.0).abs() < 1e-10, "{r:?}");
        assert!((r.value + PI / 12.0).abs() <= r.error_estimate.max(1e-10));
    }

    #[test]
    fn gamma_two() {
        let r = integrate_semi_infinite(|x| x * (-x).exp(), 1e-10).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn geometric_series_oracle() {
        // ∫ x e^{−2πx}/sinh(2πx) = Σ 2/(4πn)² = 1/48
        let f = |x: f64| x * (-2.0 * PI * x).exp() / (2.0 * PI * x).sinh();
        let r = integrate_semi_infinite(f, 1e-10).unwrap();
        assert!((r.value - 1.0 / 48.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn truncated_tail_matches_exp_sinh() {
        let f = |x: f64| log1mexp(2.0 * PI * x);
        // |ln(1 − e^{−cx})| ≤ e^{−cx}/(1 − e^{−cZ}) on [Z, ∞)
        let c = 2.0 * PI;
        let tail = |z: f64| (-c * z).exp() / (c * (1.0 - (-c * z).exp()));
        let (r, cutoff) = integrate_with_tail(f, tail, 1.0, 1e-12).unwrap();
        assert!(cutoff > 1.0);
        assert!(
            (r.value + PI / 12.0).abs() <= r.error_estimate.max(1e-13),
            "{r:?}"
        );
    }

    #[test]
    fn interval_algebraic_endpoint() {
        // ∫₀¹ x^{-1/2} = 2
        let r = integrate_interval(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn nan_integrand_is_reported() {
        let err = integrate_semi_infinite(|x| if x > 1.0 { f64::NAN } else { x }, 1e-8);
        assert!(matches!(err, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        // degree 18 monomial is integrated exactly by 10 nodes
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((i - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn composite_oscillatory() {
        let v: f64 = gauss_legendre_composite(|x: f64| (7.3 * x).cos(), 0.0, 2.0 * PI, 8, 20);
        let exact = (7.3 * 2.0 * PI).sin() / 7.3;
        assert!((v - exact).abs() < 1e-13);
    }
}
