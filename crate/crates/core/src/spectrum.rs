//! Bloch-mode frequencies and mode functions of the δ-potential ring.
//!
//! In the co-rotating frame a mode of dimensionless frequency α is a
//! superposition of two plane waves with wavenumbers α/(1−β) and
//! −α/(1+β). Periodicity plus the derivative jump at the potential fix the
//! allowed α as the positive zeros of
//!
//! ```text
//! G(α) = α·sin(πα/(1−β))·sin(πα/(1+β)) − (λ̂/4)·sin(2πα/(1−β²))
//! ```
//!
//! `G` is entire in α. It vanishes at α = 0 for every coupling; that zero
//! carries no energy and is excluded from spectra.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{bracket_roots, gauss_legendre_composite, refine_root, Bracket};
use crate::params::ModelPoint;

/// Relative secular residual |G(α)|/(α + λ̂/4) accepted for a mode frequency.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Relative residual below which a touching extremum counts as a double root.
const DOUBLE_ROOT_TOL: f64 = 1e-12;
/// Roots closer than this (relative) are flagged as a near-degenerate pair.
const NEAR_DEGENERATE: f64 = 1e-6;
/// Both Doppler sines below this: the plane waves are individually periodic.
const COINCIDENCE_TOL: f64 = 1e-7;

fn doppler_sines(alpha: f64, beta: f64) -> (f64, f64) {
    (
        (PI * alpha / (1.0 - beta)).sin(),
        (PI * alpha / (1.0 + beta)).sin(),
    )
}

/// Scale of the two terms of G, used to make residuals relative.
fn secular_scale(alpha: f64, point: &ModelPoint) -> f64 {
    alpha.abs() + 0.25 * point.lambda_hat
}

/// G(α) at a finite coupling. For λ̂ = ∞ this returns the Dirichlet
/// condition sin(2πα/(1−β²)), the limit of −4G/λ̂.
pub fn secular_value(alpha: f64, point: &ModelPoint) -> f64 {
    let g = point.gamma_inv_sq();
    let coupling = (2.0 * PI * alpha / g).sin();
    if point.is_dirichlet() {
        return coupling;
    }
    let (sp, sm) = doppler_sines(alpha, point.beta);
    alpha * sp * sm - 0.25 * point.lambda_hat * coupling
}

/// dG/dα.
pub fn secular_slope(alpha: f64, point: &ModelPoint) -> f64 {
    let b = point.beta;
    let g = point.gamma_inv_sq();
    let (ap, am) = (PI / (1.0 - b), PI / (1.0 + b));
    let dcoupling = 2.0 * PI / g * (2.0 * PI * alpha / g).cos();
    if point.is_dirichlet() {
        return dcoupling;
    }
    let (sp, sm) = ((ap * alpha).sin(), (am * alpha).sin());
    let (cp, cm) = ((ap * alpha).cos(), (am * alpha).cos());
    sp * sm + alpha * (ap * cp * sm + am * sp * cm) - 0.25 * point.lambda_hat * dcoupling
}

/// G(α)/α with its limit at α = 0 filled in. Same zeros as G on (0, ∞) and
/// no zero at the origin once λ̂ > 0.
fn scan_value(alpha: f64, point: &ModelPoint) -> f64 {
    if alpha == 0.0 {
        return -0.5 * PI * point.lambda_hat / point.gamma_inv_sq();
    }
    secular_value(alpha, point) / alpha
}

/// Ordered mode frequencies at one model point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpectrum {
    pub point: ModelPoint,
    pub alphas: Vec<f64>,
    /// Set on both members of an exactly or nearly degenerate pair.
    pub degenerate: Vec<bool>,
    pub alpha_max: f64,
}

impl ModeSpectrum {
    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Largest relative secular residual over the spectrum.
    pub fn max_residual(&self) -> f64 {
        self.alphas
            .iter()
            .map(|&a| {
                secular_value(a, &self.point).abs() / secular_scale(a, &self.point).max(1e-300)
            })
            .filter(|r| !self.point.is_dirichlet() || r.is_finite())
            .fold(0.0, f64::max)
    }

    /// Error estimate for each frequency: one Newton step |G/G′| for simple
    /// roots, √(2|G/G″|) where G′ vanishes with G.
    pub fn error_estimates(&self) -> Vec<f64> {
        self.alphas
            .iter()
            .map(|&a| {
                let floor = 2.0 * f64::EPSILON * a;
                if self.point.is_dirichlet() {
                    return floor;
                }
                let (g, dg) = (secular_value(a, &self.point), secular_slope(a, &self.point));
                if dg.abs() > 1e-6 * secular_scale(a, &self.point) {
                    (g / dg).abs().max(floor)
                } else {
                    // double root: G ≈ G″·δ²/2
                    let h = 1e-4 * a.max(1.0);
                    let curv = (secular_slope(a + h, &self.point)
                        - secular_slope(a - h, &self.point))
                        / (2.0 * h);
                    (2.0 * g.abs() / curv.abs()).sqrt().max(floor)
                }
            })
            .collect()
    }

    /// Mode count minus the asymptotic density 2A/(1−β²) at A = alpha_max.
    pub fn density_defect(&self) -> f64 {
        self.alphas.len() as f64 - 2.0 * self.alpha_max / self.point.gamma_inv_sq()
    }
}

/// All zeros of G in (0, alpha_max], each listed with its multiplicity.
///
/// Sign changes are found on a grid of spacing (1−|β|)/20 and refined with
/// Brent's method. Touching zeros, which appear wherever a left- and a
/// right-moving Doppler frequency coincide, show up as local minima of |G|;
/// these are resolved through the zero of dG/dα into either two close simple
/// roots or one double root.
pub fn mode_frequencies(point: &ModelPoint, alpha_max: f64) -> Result<ModeSpectrum> {
    point.require_subluminal()?;
    if !(alpha_max > 0.0) || !alpha_max.is_finite() {
        return Err(Error::domain(
            "alpha_max",
            format!("must be finite and > 0, got {alpha_max}"),
        ));
    }
    let g = point.gamma_inv_sq();
    let limit = alpha_max * (1.0 + 1e-12);

    if point.is_dirichlet() {
        let alphas: Vec<f64> = (1..)
            .map(|m| m as f64 * 0.5 * g)
            .take_while(|&a| a <= limit)
            .collect();
        let degenerate = vec![false; alphas.len()];
        return Ok(ModeSpectrum {
            point: *point,
            alphas,
            degenerate,
            alpha_max,
        });
    }

    let step = (1.0 - point.beta.abs()) / 20.0;
    let h = |a: f64| scan_value(a, point);
    let scan = bracket_roots(h, 0.0, alpha_max + 2.0 * step, step)?;

    let mut roots: Vec<(f64, bool)> = Vec::new();
    for b in &scan.brackets {
        roots.push((refine_root(h, b, 0.0)?, false));
    }
    for t in &scan.tangencies {
        let slope = |a: f64| secular_slope(a, point);
        let Ok(sb) = Bracket::new(slope, t.lo, t.hi) else {
            continue;
        };
        let x = refine_root(slope, &sb, 0.0)?;
        let gx = secular_value(x, point);
        if gx != 0.0 && gx.signum() != t.f_x.signum() {
            for (lo, hi) in [(t.lo, x), (x, t.hi)] {
                let br = Bracket::new(h, lo, hi).map_err(|_| Error::RootFinding {
                    lo,
                    hi,
                    detail: "split of a near-double root lost its sign change".into(),
                })?;
                roots.push((refine_root(h, &br, 0.0)?, true));
            }
        } else if gx.abs() <= DOUBLE_ROOT_TOL * secular_scale(x, point) {
            roots.push((x, true));
            roots.push((x, true));
        }
    }

    roots.retain(|&(a, _)| a > 0.0 && a <= limit);
    roots.sort_by(|p, q| p.0.total_cmp(&q.0));
    let alphas: Vec<f64> = roots.iter().map(|r| r.0).collect();
    let mut degenerate: Vec<bool> = roots.iter().map(|r| r.1).collect();
    for i in 1..alphas.len() {
        if alphas[i] - alphas[i - 1] <= NEAR_DEGENERATE * alphas[i].max(1.0) {
            degenerate[i] = true;
            degenerate[i - 1] = true;
        }
    }
    for &a in &alphas {
        let r = secular_value(a, point).abs() / secular_scale(a, point);
        if r > RESIDUAL_TOL {
            return Err(Error::NotARoot {
                alpha: a,
                residual: r,
            });
        }
    }
    Ok(ModeSpectrum {
        point: *point,
        alphas,
        degenerate,
        alpha_max,
    })
}

/// A normalized Bloch mode u(σ) = c₊·e^{iσk₊} + c₋·e^{−iσk₋} on σ ∈ [0, 2π),
/// with k₊ = α/(1−β) and k₋ = α/(1+β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFunction {
    pub alpha: f64,
    pub point: ModelPoint,
    pub k_plus: f64,
    pub k_minus: f64,
    pub c_plus: Complex64,
    pub c_minus: Complex64,
    /// Factor applied to the raw coefficients to reach unit norm.
    pub normalization: f64,
}

impl ModeFunction {
    /// The mode at a root α of G. Fails if α does not pass the secular
    /// residual test or if the frequency is degenerate (see
    /// [`ModeFunction::degenerate_pair`]).
    pub fn new(alpha: f64, point: &ModelPoint) -> Result<Self> {
        point.require_subluminal()?;
        check_root(alpha, point)?;
        let (c_plus, c_minus) = match coefficients(alpha, point) {
            Coefficients::Unique(p, m) => (p, m),
            Coefficients::Degenerate => return Err(Error::DegenerateMode { alpha }),
        };
        Self::normalized(alpha, point, c_plus, c_minus)
    }

    /// The two plane waves spanning a degenerate frequency at vanishing
    /// coupling, each normalized. They are orthogonal under the mode inner
    /// product.
    pub fn degenerate_pair(alpha: f64, point: &ModelPoint) -> Result<[Self; 2]> {
        point.require_subluminal()?;
        check_root(alpha, point)?;
        if !matches!(coefficients(alpha, point), Coefficients::Degenerate) {
            return Err(Error::domain(
                "alpha",
                format!("frequency {alpha} is not degenerate at this point"),
            ));
        }
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Ok([
            Self::normalized(alpha, point, one, zero)?,
            Self::normalized(alpha, point, zero, one)?,
        ])
    }

    /// The closed-form mode built from the periodicity condition alone,
    /// without checking that α solves the secular equation. Only the jump
    /// condition can then fail, which makes this useful as a negative
    /// control for [`mode_residuals`].
    pub fn trial(alpha: f64, point: &ModelPoint) -> Result<Self> {
        point.require_subluminal()?;
        let (p, m) = periodic_coefficients(alpha, point.beta);
        Self::normalized(alpha, point, p, m)
    }

    fn normalized(
        alpha: f64,
        point: &ModelPoint,
        c_plus: Complex64,
        c_minus: Complex64,
    ) -> Result<Self> {
        let b = point.beta;
        let mut mode = ModeFunction {
            alpha,
            point: *point,
            k_plus: alpha / (1.0 - b),
            k_minus: alpha / (1.0 + b),
            c_plus,
            c_minus,
            normalization: 1.0,
        };
        let norm = mode_inner(&mode, &mode, panels_for(&mode, &mode)).0;
        if !(norm.re > 0.0) || norm.im.abs() > 1e-8 * norm.re {
            return Err(Error::NonConvergence {
                what: "mode normalization",
                detail: format!("norm integral {norm} is not a positive real at alpha = {alpha}"),
            });
        }
        let s = norm.re.sqrt().recip();
        mode.c_plus *= s;
        mode.c_minus *= s;
        mode.normalization = s;
        Ok(mode)
    }

    pub fn value(&self, sigma: f64) -> Complex64 {
        self.c_plus * Complex64::cis(sigma * self.k_plus)
            + self.c_minus * Complex64::cis(-sigma * self.k_minus)
    }

    pub fn derivative(&self, sigma: f64) -> Complex64 {
        let i = Complex64::i();
        i * self.k_plus * self.c_plus * Complex64::cis(sigma * self.k_plus)
            - i * self.k_minus * self.c_minus * Complex64::cis(-sigma * self.k_minus)
    }

    pub fn second_derivative(&self, sigma: f64) -> Complex64 {
        -(self.k_plus * self.k_plus) * self.c_plus * Complex64::cis(sigma * self.k_plus)
            - (self.k_minus * self.k_minus) * self.c_minus * Complex64::cis(-sigma * self.k_minus)
    }
}

fn check_root(alpha: f64, point: &ModelPoint) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(
            "alpha",
            format!("must be finite and > 0, got {alpha}"),
        ));
    }
    let residual = if point.is_dirichlet() {
        secular_value(alpha, point).abs()
    } else {
        secular_value(alpha, point).abs() / secular_scale(alpha, point)
    };
    if residual > RESIDUAL_TOL {
        return Err(Error::NotARoot { alpha, residual });
    }
    Ok(())
}

enum Coefficients {
    Unique(Complex64, Complex64),
    Degenerate,
}

/// Null vector of the periodicity row: c₊ = 1 − e^{−2πik₋},
/// c₋ = −(1 − e^{2πik₊}), written through sines so near-coincident
/// frequencies keep their relative precision.
fn periodic_coefficients(alpha: f64, beta: f64) -> (Complex64, Complex64) {
    let (sp, sm) = doppler_sines(alpha, beta);
    let i = Complex64::i();
    let kp = alpha / (1.0 - beta);
    let km = alpha / (1.0 + beta);
    let a = 2.0 * i * sm * Complex64::cis(-PI * km);
    let b = -2.0 * i * sp * Complex64::cis(PI * kp);
    (a, -b)
}

fn coefficients(alpha: f64, point: &ModelPoint) -> Coefficients {
    let b = point.beta;
    let one = Complex64::new(1.0, 0.0);
    if point.is_dirichlet() {
        // u(0) = 0
        return Coefficients::Unique(one, -one);
    }
    let (sp, sm) = doppler_sines(alpha, b);
    if sp.abs().max(sm.abs()) >= COINCIDENCE_TOL {
        let (p, m) = periodic_coefficients(alpha, b);
        return Coefficients::Unique(p, m);
    }
    // Both plane waves are periodic on their own; the jump row decides.
    let i = Complex64::i();
    let kp = alpha / (1.0 - b);
    let km = alpha / (1.0 + b);
    let jump = point.lambda_hat / point.gamma_inv_sq();
    let p_plus = one - Complex64::cis(2.0 * PI * kp);
    let p_minus = one - Complex64::cis(-2.0 * PI * km);
    let r0 = i * kp * p_plus - jump;
    let r1 = -i * km * p_minus - jump;
    if r0.norm() + r1.norm() <= COINCIDENCE_TOL * (1.0 + kp + km) {
        Coefficients::Degenerate
    } else {
        Coefficients::Unique(r1, -r0)
    }
}

/// Mode functions for a whole spectrum; degenerate double roots contribute
/// both plane waves.
pub fn mode_functions(spectrum: &ModeSpectrum) -> Result<Vec<ModeFunction>> {
    let mut out = Vec::with_capacity(spectrum.len());
    let mut i = 0;
    while i < spectrum.alphas.len() {
        let a = spectrum.alphas[i];
        match ModeFunction::new(a, &spectrum.point) {
            Ok(m) => {
                out.push(m);
                i += 1;
            }
            Err(Error::DegenerateMode { .. }) => {
                let pair = ModeFunction::degenerate_pair(a, &spectrum.point)?;
                out.extend(pair);
                // the partner entry of the double root is consumed too
                i += if spectrum
                    .alphas
                    .get(i + 1)
                    .is_some_and(|&b| (b - a).abs() <= 1e-9 * a.max(1.0))
                {
                    2
                } else {
                    1
                };
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Defects of a mode against its defining conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeResiduals {
    /// max |(1−β²)u″ − 2iαβu′ + α²u| over interior grid points.
    pub ode: f64,
    /// |u(0) − u(2π⁻)|.
    pub periodicity: f64,
    /// |u′(0) − u′(2π⁻) − λ̂u(0)/(1−β²)|; |u(0)| in the Dirichlet limit.
    pub jump: f64,
}

impl ModeResiduals {
    pub fn passes(&self, ode_tol: f64, bc_tol: f64) -> bool {
        self.ode < ode_tol && self.periodicity < bc_tol && self.jump < bc_tol
    }
}

const RESIDUAL_GRID: usize = 128;

pub fn mode_residuals(mode: &ModeFunction) -> ModeResiduals {
    let b = mode.point.beta;
    let g = mode.point.gamma_inv_sq();
    let a = mode.alpha;
    let i = Complex64::i();
    let ode = (0..RESIDUAL_GRID)
        .map(|j| {
            let s = 2.0 * PI * (j as f64 + 0.5) / RESIDUAL_GRID as f64;
            (g * mode.second_derivative(s) - 2.0 * i * a * b * mode.derivative(s)
                + a * a * mode.value(s))
            .norm()
        })
        .fold(0.0, f64::max);
    let end = 2.0 * PI;
    let periodicity = (mode.value(0.0) - mode.value(end)).norm();
    let jump = if mode.point.is_dirichlet() {
        mode.value(0.0).norm()
    } else {
        (mode.derivative(0.0) - mode.derivative(end) - mode.point.lambda_hat / g * mode.value(0.0))
            .norm()
    };
    ModeResiduals {
        ode,
        periodicity,
        jump,
    }
}

fn panels_for(m: &ModeFunction, n: &ModeFunction) -> usize {
    let k = m.k_plus + m.k_minus + n.k_plus + n.k_minus;
    4 + k.ceil() as usize
}

const GL_ORDER: usize = 24;

fn mode_inner(m: &ModeFunction, n: &ModeFunction, panels: usize) -> (Complex64, Complex64) {
    let b = m.point.beta;
    let i = Complex64::i();
    let (am, an) = (m.alpha, n.alpha);
    let first = gauss_legendre_composite(
        |s| {
            let um = m.value(s).conj();
            (am + an) * um * n.value(s) - 2.0 * i * b * um * n.derivative(s)
        },
        0.0,
        2.0 * PI,
        panels,
        GL_ORDER,
    );
    let second = gauss_legendre_composite(
        |s| {
            let um = m.value(s);
            (an - am) * um * n.value(s) - 2.0 * i * b * um * n.derivative(s)
        },
        0.0,
        2.0 * PI,
        panels,
        GL_ORDER,
    );
    (first, second)
}

/// The two orthonormality integrals
/// ∮[(α_m+α_n)ū_m u_n − 2iβū_m u_n′] and ∮[(α_n−α_m)u_m u_n − 2iβu_m u_n′].
/// For modes of the same spectrum the first is δ_mn and the second 0.
pub fn inner_products(m: &ModeFunction, n: &ModeFunction) -> Result<(Complex64, Complex64)> {
    if m.point != n.point {
        return Err(Error::domain(
            "point",
            format!(
                "modes live at different model points: {:?} vs {:?}",
                m.point, n.point
            ),
        ));
    }
    Ok(mode_inner(m, n, panels_for(m, n)))
}

/// Matrix of the first inner product over a set of modes. For a degenerate
/// subspace this is the Gram matrix of the chosen basis.
pub fn gram_matrix(modes: &[ModeFunction]) -> Result<Vec<Vec<Complex64>>> {
    modes
        .iter()
        .map(|m| {
            modes
                .iter()
                .map(|n| inner_products(m, n).map(|p| p.0))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(b: f64, l: f64) -> ModelPoint {
        ModelPoint::new(b, l).unwrap()
    }

    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if f(lo) * f(m) <= 0.0 {
                hi = m
            } else {
                lo = m
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn secular_examples() {
        assert!(secular_value(1.0, &pt(0.0, 0.0)).abs() < 1e-15);
        assert!((secular_value(0.5, &pt(0.0, 2.0)) - 0.5).abs() < 1e-15);
        // coupling term vanishes at Dirichlet frequencies m(1−β²)/2
        let p = pt(0.5, 1e6);
        let g = p.gamma_inv_sq();
        assert!((2.0 * PI * 0.375 / g).sin().abs() < 1e-15);
    }

    #[test]
    fn slope_matches_finite_difference() {
        let p = pt(0.3, 2.5);
        for a in [0.2, 1.1, 3.7] {
            let h = 1e-6;
            let fd = (secular_value(a + h, &p) - secular_value(a - h, &p)) / (2.0 * h);
            assert!((fd - secular_slope(a, &p)).abs() < 1e-6);
        }
    }

    #[test]
    fn free_ring_is_doubly_degenerate() {
        let s = mode_frequencies(&pt(0.0, 0.0), 3.5).unwrap();
        let want = [1.0, 1.0, 2.0, 2.0, 3.0, 3.0];
        assert_eq!(s.len(), want.len(), "{:?}", s.alphas);
        for (a, w) in s.alphas.iter().zip(want) {
            assert!((a - w).abs() < 1e-10);
        }
        assert!(s.degenerate.iter().all(|&d| d));
    }

    #[test]
    fn doppler_multiset() {
        let s = mode_frequencies(&pt(0.5, 0.0), 3.2).unwrap();
        let want = [0.5, 1.0, 1.5, 1.5, 2.0, 2.5, 3.0, 3.0];
        assert_eq!(s.len(), want.len(), "{:?}", s.alphas);
        for (a, w) in s.alphas.iter().zip(want) {
            assert!((a - w).abs() < 1e-10, "{a} vs {w}");
        }
    }

    #[test]
    fn coupled_ring_at_rest() {
        let p = pt(0.0, 2.0);
        let s = mode_frequencies(&p, 1.2).unwrap();
        assert_eq!(s.len(), 2, "{:?}", s.alphas);
        // oracle: α sin πα = cos πα on (0, 1/2)
        let oracle = bisect(|a| a * (PI * a).sin() - (PI * a).cos(), 0.3, 0.45);
        assert!(s.alphas[0] > 0.38 && s.alphas[0] < 0.39);
        assert!((s.alphas[0] - oracle).abs() < 1e-12);
        assert!((s.alphas[1] - 1.0).abs() < 1e-12);
        assert!(s.max_residual() < RESIDUAL_TOL);
    }

    #[test]
    fn dirichlet_spectrum_closed_form() {
        let p = ModelPoint::new(0.5, f64::INFINITY).unwrap();
        let s = mode_frequencies(&p, 1.6).unwrap();
        let want: Vec<f64> = (1..=4).map(|m| m as f64 * 0.375).collect();
        assert_eq!(s.alphas, want);
    }

    #[test]
    fn small_coupling_first_root_is_found() {
        // α tan πα = λ̂/2 gives α ≈ sqrt(λ̂/2π) for small λ̂
        let p = pt(0.0, 1e-6);
        let s = mode_frequencies(&p, 0.5).unwrap();
        assert_eq!(s.len(), 1);
        let oracle = bisect(|a| a * (PI * a).sin() - 0.5e-6 * (PI * a).cos(), 1e-6, 0.1);
        assert!((s.alphas[0] - oracle).abs() < 1e-12);
    }

    #[test]
    fn bad_alpha_max() {
        assert!(mode_frequencies(&pt(0.0, 0.0), 0.0).is_err());
        assert!(mode_frequencies(&pt(0.0, 0.0), f64::NAN).is_err());
    }

    #[test]
    fn free_mode_is_a_plane_wave() {
        let p = pt(0.0, 0.0);
        assert!(matches!(
            ModeFunction::new(1.0, &p),
            Err(Error::DegenerateMode { .. })
        ));
        let [a, b] = ModeFunction::degenerate_pair(1.0, &p).unwrap();
        let r = mode_residuals(&a);
        assert!(
            r.ode < 1e-10 && r.periodicity < 1e-10 && r.jump < 1e-10,
            "{r:?}"
        );
        // |u| is constant for a single plane wave
        assert!((a.value(0.3).norm() - a.value(2.0).norm()).abs() < 1e-14);
        let (ip, _) = inner_products(&a, &b).unwrap();
        assert!(ip.norm() < 1e-12);
    }

    #[test]
    fn strong_coupling_mode_vanishes_at_wall() {
        let p = pt(0.0, 1e8);
        let s = mode_frequencies(&p, 0.6).unwrap();
        let m = ModeFunction::new(s.alphas[0], &p).unwrap();
        assert!((s.alphas[0] - 0.5).abs() < 1e-7);
        assert!(m.value(0.0).norm() < 1e-6);
        let d = ModeFunction::new(0.5, &ModelPoint::new(0.0, f64::INFINITY).unwrap()).unwrap();
        assert!(d.value(0.0).norm() < 1e-15);
    }

    #[test]
    fn first_coupled_mode_residuals() {
        let p = pt(0.0, 2.0);
        let s = mode_frequencies(&p, 1.2).unwrap();
        let m = ModeFunction::new(s.alphas[0], &p).unwrap();
        let r = mode_residuals(&m);
        assert!(
            r.ode < 1e-8 && r.periodicity < 1e-8 && r.jump < 1e-6,
            "{r:?}"
        );
        let (n, second) = inner_products(&m, &m).unwrap();
        assert!((n - 1.0).norm() < 1e-10);
        assert!(second.norm() < 1e-10);
    }

    #[test]
    fn perturbed_frequency_breaks_the_jump() {
        let p = pt(0.0, 2.0);
        let s = mode_frequencies(&p, 1.2).unwrap();
        let a = s.alphas[0] + 1e-3;
        assert!(matches!(
            ModeFunction::new(a, &p),
            Err(Error::NotARoot { .. })
        ));
        let m = ModeFunction::trial(a, &p).unwrap();
        let r = mode_residuals(&m);
        assert!(r.periodicity < 1e-10);
        assert!(r.jump > 1e-4, "{r:?}");
        assert!(!r.passes(1e-8, 1e-6));
    }

    #[test]
    fn coincidence_root_with_coupling() {
        // α = 1.5 at β = 0.5 survives any coupling; the mode has u(0) = 0
        let p = pt(0.5, 2.0);
        let s = mode_frequencies(&p, 1.6).unwrap();
        assert!(
            s.alphas.iter().any(|&a| (a - 1.5).abs() < 1e-12),
            "{:?}",
            s.alphas
        );
        let m = ModeFunction::new(1.5, &p).unwrap();
        assert!(m.value(0.0).norm() < 1e-12);
        assert!(mode_residuals(&m).passes(1e-8, 1e-6));
    }

    #[test]
    fn mismatched_points_rejected() {
        let a = ModeFunction::new(1.0, &pt(0.0, 2.0)).unwrap();
        let b = ModeFunction::new(1.0, &pt(0.0, 3.0)).unwrap();
        assert!(inner_products(&a, &b).is_err());
    }
}
