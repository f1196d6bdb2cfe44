//! Sign-change scanning and bracketed root refinement.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An interval on which a continuous function changes sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    /// Evaluates `f` at both ends and checks for opposite signs.
    pub fn new<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::domain(
                "bracket",
                format!("need lo < hi, got [{lo}, {hi}]"),
            ));
        }
        let (f_lo, f_hi) = (f(lo), f(hi));
        if !(f_lo * f_hi < 0.0) {
            return Err(Error::RootFinding {
                lo,
                hi,
                detail: format!("no sign change: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}"),
            });
        }
        Ok(Bracket { lo, hi, f_lo, f_hi })
    }
}

/// A sampled local minimum of |f| without a sign change: a candidate
/// double root or a near miss. `lo`/`hi` are the neighbouring samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tangency {
    pub lo: f64,
    pub x: f64,
    pub hi: f64,
    pub f_x: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RootScan {
    pub brackets: Vec<Bracket>,
    pub tangencies: Vec<Tangency>,
}

/// Samples `f` on [lo, hi] with spacing `step` (the last sample is `hi`) and
/// returns every sign change plus the local minima of |f| that do not cross
/// zero. A minimum is flagged when its value is at most `tangency_ratio`
/// times the larger neighbour; `1.0` flags every local minimum.
pub fn bracket_roots_with<F>(
    f: F,
    lo: f64,
    hi: f64,
    step: f64,
    tangency_ratio: f64,
) -> Result<RootScan>
where
    F: Fn(f64) -> f64,
{
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::domain("step", format!("must be > 0, got {step}")));
    }
    if !(lo < hi) {
        return Err(Error::domain(
            "interval",
            format!("need lo < hi, got [{lo}, {hi}]"),
        ));
    }
    let n = ((hi - lo) / step).ceil() as usize;
    let xs: Vec<f64> = (0..=n)
        .map(|i| if i == n { hi } else { lo + i as f64 * step })
        .collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    if let Some(i) = fs.iter().position(|v| v.is_nan()) {
        return Err(Error::NonFinite {
            what: "bracket scan",
            at: xs[i],
        });
    }

    let mut scan = RootScan::default();
    // index of the last non-zero sample
    let mut last: Option<usize> = None;
    for k in 0..xs.len() {
        if fs[k] == 0.0 {
            continue;
        }
        if let Some(j) = last {
            let opposite = fs[j].signum() != fs[k].signum();
            if opposite {
                scan.brackets.push(Bracket {
                    lo: xs[j],
                    hi: xs[k],
                    f_lo: fs[j],
                    f_hi: fs[k],
                });
            } else if k > j + 1 {
                // exact zeros between samples of equal sign: touching root
                let mid = (j + 1 + k - 1) / 2;
                scan.tangencies.push(Tangency {
                    lo: xs[j],
                    x: xs[mid],
                    hi: xs[k],
                    f_x: 0.0,
                });
            }
        }
        last = Some(k);
    }

    for i in 1..xs.len().saturating_sub(1) {
        let (a, b, c) = (fs[i - 1], fs[i], fs[i + 1]);
        if a == 0.0 || b == 0.0 || c == 0.0 {
            continue;
        }
        let same = a.signum() == b.signum() && b.signum() == c.signum();
        let local_min = b.abs() < a.abs() && b.abs() <= c.abs();
        if same && local_min && b.abs() <= tangency_ratio * a.abs().max(c.abs()) {
            scan.tangencies.push(Tangency {
                lo: xs[i - 1],
                x: xs[i],
                hi: xs[i + 1],
                f_x: b,
            });
        }
    }
    scan.tangencies.sort_by(|p, q| p.x.total_cmp(&q.x));
    Ok(scan)
}

/// [`bracket_roots_with`] flagging every sampled local minimum of |f|.
pub fn bracket_roots<F>(f: F, lo: f64, hi: f64, step: f64) -> Result<RootScan>
where
    F: Fn(f64) -> f64,
{
    bracket_roots_with(f, lo, hi, step, 1.0)
}

const MAX_ITER: usize = 200;

/// Brent's method: inverse quadratic / secant steps with a bisection
/// fallback, so convergence is guaranteed on a valid bracket. Stops once the
/// bracket is narrower than `tol` (plus a few ulps of the root) or `f` hits
/// exactly zero.
pub fn refine_root<F>(f: F, bracket: &Bracket, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (bracket.f_lo, bracket.f_hi);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::RootFinding {
            lo: a,
            hi: b,
            detail: "endpoints do not straddle a root".into(),
        });
    }
    let (mut c, mut fc) = (b, fb);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::NonFinite {
                what: "root refinement",
                at: b,
            });
        }
    }
    Err(Error::RootFinding {
        lo: bracket.lo,
        hi: bracket.hi,
        detail: format!("evaluation budget of {MAX_ITER} exhausted"),
    })
}
