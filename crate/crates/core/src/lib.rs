//! Casimir energy, zero-point angular momentum and moment of inertia of a
//! massless scalar field on a rotating ring with a single delta-function
//! coupling, in units ħ = c = R = 1.
//!
//! Start from [`params::ModelPoint`], which carries the rim speed β = ΩR/c
//! and the coupling λ̂ = λR²/c² (`f64::INFINITY` for Dirichlet walls).
//!
//! ```
//! use casimir_ring::energy::casimir_energy_corotating;
//! use casimir_ring::params::ModelPoint;
//! use casimir_ring::rotation::ell_zp;
//!
//! let point = ModelPoint::new(0.5, f64::INFINITY).unwrap();
//! let e = casimir_energy_corotating(&point, 1e-10).unwrap();
//! assert!((e.field_energy + 0.75 / 48.0).abs() < 1e-15);
//! let l = ell_zp(&point, 1e-10).unwrap();
//! assert!((l.value + 0.5 / 24.0).abs() < 1e-14);
//! ```

// Guards are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod energy;
pub mod error;
pub mod numerics;
pub mod params;
pub mod rotation;
pub mod spectrum;
