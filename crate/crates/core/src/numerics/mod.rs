//! Numerical kernels: double-exponential quadrature, bracketed root
//! finding and Richardson-extrapolated differentiation.

pub mod diff;
pub mod quadrature;
pub mod roots;

pub use diff::{derivative, derivative_with, second_derivative_with, Derivative, DiffOptions};
pub use quadrature::{
    gauss_legendre, gauss_legendre_composite, integrate_interval, integrate_panels,
    integrate_semi_infinite, integrate_with_tail, QuadratureResult,
};
pub use roots::{bracket_roots, bracket_roots_with, refine_root, Bracket, RootScan, Tangency};

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0 }
    }
}
