//! C interface to `casimir_ring`.
//!
//! Every fallible function returns a [`CrStatus`] and writes results through
//! out-pointers, which are left untouched on failure. The message of the
//! most recent failure on the calling thread is available from
//! [`cr_last_error`]. Handles are opaque and must be released with their
//! `_free` function; freeing NULL is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use casimir_ring::energy::{casimir_energy_corotating, corotating_total_energy};
use casimir_ring::error::Error;
use casimir_ring::numerics::Estimate;
use casimir_ring::params::ModelPoint;
use casimir_ring::rotation::{
    ell_zp, ell_zp_bound, inertia_zp, izp_lightspeed_bound, omega_of_ell, stationary_energy,
};
use casimir_ring::spectrum::{
    mode_frequencies, mode_functions, mode_residuals, ModeFunction, ModeSpectrum,
};

/// Status codes. Values 2 to 4 match the exit codes of the command-line tool.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// Argument outside the model's domain, or index out of range.
    Domain = 2,
    /// Quadrature, differentiation or root finding failed.
    Numerical = 3,
    /// A model assumption (such as positive total inertia) does not hold.
    ModelViolation = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

/// Mode frequencies at one model point, with their mode functions.
pub struct CrSpectrum {
    spectrum: ModeSpectrum,
    modes: Vec<ModeFunction>,
}

/// One normalized mode function u(σ).
pub struct CrMode {
    mode: ModeFunction,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CrStatus {
    match e.exit_code() {
        2 => CrStatus::Domain,
        4 => CrStatus::ModelViolation,
        _ => CrStatus::Numerical,
    }
}

enum Fail {
    Null(&'static str),
    Model(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Model(e)
    }
}

/// Runs `body` behind a panic guard and records any failure.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> CrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CrStatus::Ok,
        Ok(Err(Fail::Null(name))) => {
            set_last_error(format!("`{name}` is NULL"));
            CrStatus::NullPointer
        }
        Ok(Err(Fail::Model(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            CrStatus::Panic
        }
    }
}

fn out<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Fail> {
    // SAFETY: the caller guarantees a non-NULL pointer is valid for writes.
    unsafe { p.as_mut() }.ok_or(Fail::Null(name))
}

fn handle<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Fail> {
    // SAFETY: the caller guarantees a non-NULL handle came from this library
    // and has not been freed.
    unsafe { p.as_ref() }.ok_or(Fail::Null(name))
}

fn write_estimate(e: Estimate, value: *mut f64, error: *mut f64) -> Result<(), Fail> {
    let v = out(value, "value")?;
    // error is optional
    if let Some(err) = unsafe { error.as_mut() } {
        *err = e.error;
    }
    *v = e.value;
    Ok(())
}

/// Message of the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Computes the spectrum up to `alpha_max`. Pass `INFINITY` as
/// `lambda_hat` for Dirichlet walls.
///
/// # Safety
/// `out_spectrum` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_spectrum_new(
    beta: f64,
    lambda_hat: f64,
    alpha_max: f64,
    out_spectrum: *mut *mut CrSpectrum,
) -> CrStatus {
    guard(|| {
        let slot = out(out_spectrum, "out_spectrum")?;
        let point = ModelPoint::new(beta, lambda_hat)?;
        let spectrum = mode_frequencies(&point, alpha_max)?;
        let modes = mode_functions(&spectrum)?;
        *slot = Box::into_raw(Box::new(CrSpectrum { spectrum, modes }));
        Ok(())
    })
}

/// # Safety
/// `spectrum` must be NULL or a live handle from [`cr_spectrum_new`].
#[no_mangle]
pub unsafe extern "C" fn cr_spectrum_free(spectrum: *mut CrSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Number of modes; 0 for a NULL handle.
///
/// # Safety
/// `spectrum` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cr_spectrum_len(spectrum: *const CrSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.spectrum.len())
}

/// Frequency `index` (ascending, zero-based) and whether it belongs to a
/// degenerate pair. `out_degenerate` may be NULL.
///
/// # Safety
/// `spectrum` must be a live handle; out-pointers NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_spectrum_get(
    spectrum: *const CrSpectrum,
    index: usize,
    out_alpha: *mut f64,
    out_degenerate: *mut bool,
) -> CrStatus {
    guard(|| {
        let s = handle(spectrum, "spectrum")?;
        let alpha = out(out_alpha, "out_alpha")?;
        let a = *s
            .spectrum
            .alphas
            .get(index)
            .ok_or_else(|| out_of_range(index, s.spectrum.len()))?;
        *alpha = a;
        if let Some(d) = out_degenerate.as_mut() {
            *d = s.spectrum.degenerate[index];
        }
        Ok(())
    })
}

fn out_of_range(index: usize, len: usize) -> Error {
    Error::Domain {
        field: "index",
        reason: format!("{index} is out of range for {len} modes"),
    }
}

/// Mode function `index` of the spectrum. The mode owns its data and
/// outlives the spectrum.
///
/// # Safety
/// `spectrum` must be a live handle; `out_mode` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_mode_new(
    spectrum: *const CrSpectrum,
    index: usize,
    out_mode: *mut *mut CrMode,
) -> CrStatus {
    guard(|| {
        let s = handle(spectrum, "spectrum")?;
        let slot = out(out_mode, "out_mode")?;
        let mode = *s
            .modes
            .get(index)
            .ok_or_else(|| out_of_range(index, s.modes.len()))?;
        *slot = Box::into_raw(Box::new(CrMode { mode }));
        Ok(())
    })
}

/// # Safety
/// `mode` must be NULL or a live handle from [`cr_mode_new`].
#[no_mangle]
pub unsafe extern "C" fn cr_mode_free(mode: *mut CrMode) {
    if !mode.is_null() {
        drop(Box::from_raw(mode));
    }
}

/// u(σ) for σ in [0, 2π).
///
/// # Safety
/// `mode` must be a live handle; out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_mode_eval(
    mode: *const CrMode,
    sigma: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> CrStatus {
    guard(|| {
        let m = handle(mode, "mode")?;
        let (re, im) = (out(out_re, "out_re")?, out(out_im, "out_im")?);
        let u = m.mode.value(sigma);
        *re = u.re;
        *im = u.im;
        Ok(())
    })
}

/// Frequency of the mode.
///
/// # Safety
/// `mode` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cr_mode_alpha(mode: *const CrMode) -> f64 {
    mode.as_ref().map_or(f64::NAN, |m| m.mode.alpha)
}

/// ODE residual, periodicity defect and jump defect of the mode.
///
/// # Safety
/// `mode` must be a live handle; out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_mode_residuals(
    mode: *const CrMode,
    out_ode: *mut f64,
    out_periodicity: *mut f64,
    out_jump: *mut f64,
) -> CrStatus {
    guard(|| {
        let m = handle(mode, "mode")?;
        let r = mode_residuals(&m.mode);
        *out(out_ode, "out_ode")? = r.ode;
        *out(out_periodicity, "out_periodicity")? = r.periodicity;
        *out(out_jump, "out_jump")? = r.jump;
        Ok(())
    })
}

fn at_point(
    beta: f64,
    lambda_hat: f64,
    value: *mut f64,
    error: *mut f64,
    f: impl FnOnce(&ModelPoint) -> casimir_ring::error::Result<Estimate>,
) -> CrStatus {
    guard(|| {
        out(value, "out_value")?;
        let point = ModelPoint::new(beta, lambda_hat)?;
        write_estimate(f(&point)?, value, error)
    })
}

/// Co-rotating field energy in units of ħc/R. `out_error` may be NULL.
///
/// # Safety
/// Out-pointers must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_casimir_energy(
    beta: f64,
    lambda_hat: f64,
    tol: f64,
    out_value: *mut f64,
    out_error: *mut f64,
) -> CrStatus {
    at_point(beta, lambda_hat, out_value, out_error, |p| {
        casimir_energy_corotating(p, tol).map(|e| Estimate {
            value: e.field_energy,
            error: e.quadrature_error,
        })
    })
}

/// Co-rotating total energy E_c − Îβ²/2 in units of ħc/R.
///
/// # Safety
/// Out-pointers must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_corotating_total_energy(
    beta: f64,
    lambda_hat: f64,
    inertia_hat: f64,
    tol: f64,
    out_value: *mut f64,
    out_error: *mut f64,
) -> CrStatus {
    at_point(beta, lambda_hat, out_value, out_error, |p| {
        corotating_total_energy(p, inertia_hat, tol).map(|e| Estimate {
            value: e.total,
            error: e.quadrature_error,
        })
    })
}

/// Energy in the stationary frame, in units of ħc/R.
///
/// # Safety
/// Out-pointers must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_stationary_energy(
    beta: f64,
    lambda_hat: f64,
    inertia_hat: f64,
    tol: f64,
    out_value: *mut f64,
    out_error: *mut f64,
) -> CrStatus {
    at_point(beta, lambda_hat, out_value, out_error, |p| {
        stationary_energy(p, inertia_hat, tol)
    })
}

/// Zero-point angular momentum in units of ħ.
///
/// # Safety
/// Out-pointers must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_ell_zp(
    beta: f64,
    lambda_hat: f64,
    tol: f64,
    out_value: *mut f64,
    out_error: *mut f64,
) -> CrStatus {
    at_point(beta, lambda_hat, out_value, out_error, |p| ell_zp(p, tol))
}

/// Zero-point moment of inertia in units of ħR/c.
///
/// # Safety
/// Out-pointers must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_inertia_zp(
    beta: f64,
    lambda_hat: f64,
    tol: f64,
    out_value: *mut f64,
    out_error: *mut f64,
) -> CrStatus {
    at_point(beta, lambda_hat, out_value, out_error, |p| {
        inertia_zp(p, tol)
    })
}

/// Supremum of |ℓ_ZP| over |β| < 1 at fixed coupling.
///
/// # Safety
/// Out-pointers must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_ell_zp_bound(
    lambda_hat: f64,
    tol: f64,
    out_value: *mut f64,
    out_error: *mut f64,
) -> CrStatus {
    guard(|| {
        out(out_value, "out_value")?;
        write_estimate(ell_zp_bound(lambda_hat, tol)?, out_value, out_error)
    })
}

/// Light-speed limit of I_ZP, its infimum over |β| < 1.
///
/// # Safety
/// Out-pointers must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_izp_lightspeed_bound(
    lambda_hat: f64,
    tol: f64,
    out_value: *mut f64,
    out_error: *mut f64,
) -> CrStatus {
    guard(|| {
        out(out_value, "out_value")?;
        write_estimate(izp_lightspeed_bound(lambda_hat, tol)?, out_value, out_error)
    })
}

/// Rim speed β at which the total angular momentum equals `ell_total`.
///
/// # Safety
/// `out_beta` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_omega_of_ell(
    ell_total: f64,
    lambda_hat: f64,
    inertia_hat: f64,
    tol: f64,
    out_beta: *mut f64,
) -> CrStatus {
    guard(|| {
        let slot = out(out_beta, "out_beta")?;
        *slot = omega_of_ell(ell_total, lambda_hat, inertia_hat, tol)?;
        Ok(())
    })
}
