//! Central differences with Richardson extrapolation (Ridders' tableau).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Derivative {
    pub value: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffOptions {
    /// Largest step of the tableau; later columns halve it.
    pub initial_step: f64,
    /// The stencil must stay inside this open interval.
    pub domain: Option<(f64, f64)>,
    pub max_levels: usize,
    pub tol: f64,
}

impl DiffOptions {
    pub fn new(initial_step: f64, tol: f64) -> Self {
        DiffOptions {
            initial_step,
            domain: None,
            max_levels: 10,
            tol,
        }
    }

    pub fn within(mut self, lo: f64, hi: f64) -> Self {
        self.domain = Some((lo, hi));
        self
    }
}

#[derive(Clone, Copy)]
enum Order {
    First,
    Second,
}

fn richardson<F>(f: F, x: f64, opts: &DiffOptions, order: Order) -> Result<Derivative>
where
    F: Fn(f64) -> Result<f64>,
{
    let h0 = opts.initial_step;
    if !(h0 > 0.0) {
        return Err(Error::domain(
            "initial_step",
            format!("must be > 0, got {h0}"),
        ));
    }
    if let Some((lo, hi)) = opts.domain {
        if x - h0 <= lo || x + h0 >= hi {
            return Err(Error::domain(
                "x",
                format!(
                    "stencil [{}, {}] leaves the domain ({lo}, {hi})",
                    x - h0,
                    x + h0
                ),
            ));
        }
    }
    let center = match order {
        Order::First => 0.0,
        Order::Second => f(x)?,
    };
    let estimate = |h: f64| -> Result<f64> {
        let (fp, fm) = (f(x + h)?, f(x - h)?);
        Ok(match order {
            Order::First => (fp - fm) / (2.0 * h),
            Order::Second => (fp - 2.0 * center + fm) / (h * h),
        })
    };

    const SHRINK: f64 = 2.0;
    const SHRINK2: f64 = SHRINK * SHRINK;
    let n = opts.max_levels.max(2);
    let mut table = vec![vec![0.0; n]; n];
    let mut h = h0;
    table[0][0] = estimate(h)?;
    let mut best = Derivative {
        value: table[0][0],
        error_estimate: f64::INFINITY,
    };
    for i in 1..n {
        h /= SHRINK;
        table[0][i] = estimate(h)?;
        let mut fac = SHRINK2;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            fac *= SHRINK2;
            let err = (table[j][i] - table[j - 1][i])
                .abs()
                .max((table[j][i] - table[j - 1][i - 1]).abs());
            if err <= best.error_estimate {
                best = Derivative {
                    value: table[j][i],
                    error_estimate: err,
                };
            }
        }
        // higher orders stopped improving: rounding has taken over
        if (table[i][i] - table[i - 1][i - 1]).abs() >= 2.0 * best.error_estimate {
            break;
        }
    }
    if best.error_estimate > opts.tol {
        return Err(Error::NonConvergence {
            what: "Richardson differentiation",
            detail: format!(
                "error estimate {:e} above tolerance {:e} at x = {x}",
                best.error_estimate, opts.tol
            ),
        });
    }
    Ok(best)
}

/// First derivative by Richardson-extrapolated central differences.
pub fn derivative_with<F>(f: F, x: f64, opts: &DiffOptions) -> Result<Derivative>
where
    F: Fn(f64) -> Result<f64>,
{
    richardson(f, x, opts, Order::First)
}

/// Second derivative from the symmetric three-point stencil, extrapolated
/// the same way.
pub fn second_derivative_with<F>(f: F, x: f64, opts: &DiffOptions) -> Result<Derivative>
where
    F: Fn(f64) -> Result<f64>,
{
    richardson(f, x, opts, Order::Second)
}

/// First derivative of an infallible function with initial step 0.1.
pub fn derivative<F>(f: F, x: f64, tol: f64) -> Result<Derivative>
where
    F: Fn(f64) -> f64,
{
    derivative_with(|t| Ok(f(t)), x, &DiffOptions::new(0.1, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square() {
        let d = derivative(|x| x * x, 3.0, 1e-8).unwrap();
        assert!((d.value - 6.0).abs() < 1e-8);
    }

    #[test]
    fn sine_at_zero() {
        let d = derivative(f64::sin, 0.0, 1e-8).unwrap();
        assert!((d.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn log_one_plus() {
        let d = derivative(f64::ln_1p, 1.0, 1e-8).unwrap();
        assert!((d.value - 0.5).abs() < 1e-10);
    }

    #[test]
    fn even_function_has_zero_slope_at_origin() {
        let d = derivative(|x| (2.0 * x).cos() + x.powi(4), 0.0, 1e-8).unwrap();
        assert!(d.value.abs() < 1e-12);
    }

    #[test]
    fn stencil_outside_domain() {
        let opts = DiffOptions::new(1e-3, 1e-8).within(-1.0, 1.0);
        let err = derivative_with(Ok, 0.9995, &opts).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
    }

    #[test]
    fn second_derivative_of_cosine() {
        let d = second_derivative_with(|x| Ok(x.cos()), 0.3, &DiffOptions::new(0.1, 1e-7)).unwrap();
        assert!((d.value + 0.3f64.cos()).abs() < 1e-8, "{d:?}");
    }

    #[test]
    fn propagates_function_errors() {
        let r = derivative_with(
            |x| {
                if x > 0.05 {
                    Err(Error::ModelViolation("x".into()))
                } else {
                    Ok(x)
                }
            },
            0.0,
            &DiffOptions::new(0.1, 1e-8),
        );
        assert!(r.is_err());
    }
}
