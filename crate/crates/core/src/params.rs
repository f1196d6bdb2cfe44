//! Physical parameters, the dimensionless model point, and unit conversion.
//!
//! Everything downstream works in units ħ = c = R = 1. Two numbers fully
//! determine a state: the rim speed β = ΩR/c and the coupling λ̂ = λR²/c².
//! A classical moment of inertia enters as Î = I·c/(ħR).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical description of the ring and field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingConfig {
    pub radius: f64,
    pub light_speed: f64,
    pub hbar: f64,
    pub classical_inertia: f64,
    pub coupling: f64,
    lambda_hat: f64,
    inertia_hat: f64,
}

fn positive(field: &'static str, v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::domain(field, format!("must be finite, got {v}")));
    }
    if v <= 0.0 {
        return Err(Error::domain(field, format!("must be > 0, got {v}")));
    }
    Ok(v)
}

fn non_negative(field: &'static str, v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::domain(field, format!("must be finite, got {v}")));
    }
    if v < 0.0 {
        return Err(Error::domain(field, format!("must be >= 0, got {v}")));
    }
    Ok(v)
}

/// Validates the physical inputs and derives the dimensionless groups.
pub fn make_config(
    radius: f64,
    light_speed: f64,
    hbar: f64,
    classical_inertia: f64,
    coupling: f64,
) -> Result<RingConfig> {
    let radius = positive("radius", radius)?;
    let light_speed = positive("light_speed", light_speed)?;
    let hbar = positive("hbar", hbar)?;
    let classical_inertia = non_negative("classical_inertia", classical_inertia)?;
    let coupling = non_negative("coupling", coupling)?;
    Ok(RingConfig {
        radius,
        light_speed,
        hbar,
        classical_inertia,
        coupling,
        lambda_hat: coupling * radius * radius / (light_speed * light_speed),
        inertia_hat: classical_inertia * light_speed / (hbar * radius),
    })
}

/// Whether a rim speed of exactly c is acceptable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LightSpeed {
    #[default]
    Forbid,
    Allow,
}

impl RingConfig {
    /// λ̂ = λR²/c².
    pub fn lambda_hat(&self) -> f64 {
        self.lambda_hat
    }

    /// Î = I·c/(ħR).
    pub fn inertia_hat(&self) -> f64 {
        self.inertia_hat
    }

    /// β = ΩR/c for an angular velocity Ω.
    pub fn model_point(&self, omega: f64, light_speed: LightSpeed) -> Result<ModelPoint> {
        if !omega.is_finite() {
            return Err(Error::domain(
                "omega",
                format!("must be finite, got {omega}"),
            ));
        }
        let beta = omega * self.radius / self.light_speed;
        match light_speed {
            LightSpeed::Forbid => ModelPoint::new(beta, self.lambda_hat),
            LightSpeed::Allow => ModelPoint::new_allowing_light_speed(beta, self.lambda_hat),
        }
    }

    /// Converts a dimensionless result back to physical units.
    pub fn to_physical(&self, value: f64, kind: QuantityKind) -> f64 {
        value * kind.scale(self)
    }

    /// Inverse of [`RingConfig::to_physical`].
    pub fn to_dimensionless(&self, value: f64, kind: QuantityKind) -> f64 {
        value / kind.scale(self)
    }
}

/// Free-function form of [`RingConfig::to_physical`] taking the kind by name.
pub fn to_physical(config: &RingConfig, value: f64, kind: &str) -> Result<f64> {
    let kind: QuantityKind = kind.parse()?;
    Ok(config.to_physical(value, kind))
}

/// Kind of dimensionless output, used to select the unit scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantityKind {
    Energy,
    AngularMomentum,
    Inertia,
    Frequency,
}

impl QuantityKind {
    fn scale(self, cfg: &RingConfig) -> f64 {
        let (r, c, h) = (cfg.radius, cfg.light_speed, cfg.hbar);
        match self {
            QuantityKind::Energy => h * c / r,
            QuantityKind::AngularMomentum => h,
            QuantityKind::Inertia => h * r / c,
            QuantityKind::Frequency => c / r,
        }
    }

    /// Unit label for the dimensionless value.
    pub fn unit(self) -> &'static str {
        match self {
            QuantityKind::Energy => "hbar*c/R",
            QuantityKind::AngularMomentum => "hbar",
            QuantityKind::Inertia => "hbar*R/c",
            QuantityKind::Frequency => "c/R",
        }
    }
}

impl FromStr for QuantityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "energy" => Ok(QuantityKind::Energy),
            "angular_momentum" => Ok(QuantityKind::AngularMomentum),
            "inertia" => Ok(QuantityKind::Inertia),
            "frequency" => Ok(QuantityKind::Frequency),
            other => Err(Error::domain(
                "kind",
                format!("unknown quantity kind `{other}`"),
            )),
        }
    }
}

impl fmt::Display for QuantityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            QuantityKind::Energy => "energy",
            QuantityKind::AngularMomentum => "angular_momentum",
            QuantityKind::Inertia => "inertia",
            QuantityKind::Frequency => "frequency",
        };
        f.write_str(s)
    }
}

/// The dimensionless state (β, λ̂) at which every quantity is evaluated.
///
/// `lambda_hat` may be `+inf`, which selects the closed-form Dirichlet
/// results wherever they exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint {
    pub beta: f64,
    #[serde(with = "coupling_serde")]
    pub lambda_hat: f64,
}

fn check_lambda(lambda_hat: f64) -> Result<f64> {
    if lambda_hat.is_nan() || lambda_hat < 0.0 {
        return Err(Error::domain(
            "lambda_hat",
            format!("must be >= 0, got {lambda_hat}"),
        ));
    }
    Ok(lambda_hat)
}

impl ModelPoint {
    /// A subluminal point, |β| < 1.
    pub fn new(beta: f64, lambda_hat: f64) -> Result<Self> {
        let lambda_hat = check_lambda(lambda_hat)?;
        if !beta.is_finite() || beta.abs() >= 1.0 {
            let reason = if beta.abs() == 1.0 {
                "|beta| = 1 requires the light-speed flag".to_string()
            } else {
                format!("|beta| must be < 1 (superluminal rim speed), got {beta}")
            };
            return Err(Error::domain("beta", reason));
        }
        Ok(ModelPoint { beta, lambda_hat })
    }

    /// Like [`ModelPoint::new`] but also admits |β| = 1, where only the
    /// light-speed bound formulas are meaningful.
    pub fn new_allowing_light_speed(beta: f64, lambda_hat: f64) -> Result<Self> {
        let lambda_hat = check_lambda(lambda_hat)?;
        if !beta.is_finite() || beta.abs() > 1.0 {
            return Err(Error::domain(
                "beta",
                format!("|beta| must be <= 1 (superluminal rim speed), got {beta}"),
            ));
        }
        Ok(ModelPoint { beta, lambda_hat })
    }

    pub fn is_dirichlet(&self) -> bool {
        self.lambda_hat.is_infinite()
    }

    /// Rejects points on the light cone for energy and momentum evaluation.
    pub fn require_subluminal(&self) -> Result<()> {
        if self.beta.abs() < 1.0 {
            Ok(())
        } else {
            Err(Error::domain(
                "beta",
                format!("energy integrals need |beta| < 1, got {}", self.beta),
            ))
        }
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        ModelPoint::new(beta, self.lambda_hat)
    }

    /// 1 − β².
    pub fn gamma_inv_sq(&self) -> f64 {
        (1.0 - self.beta) * (1.0 + self.beta)
    }
}

/// JSON has no infinity; the Dirichlet coupling is written as `"inf"`.
pub(crate) mod coupling_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    fn to_repr(v: f64) -> Repr {
        if v.is_finite() {
            Repr::Num(v)
        } else {
            Repr::Text(v.to_string())
        }
    }

    fn from_repr<E: serde::de::Error>(r: Repr) -> Result<f64, E> {
        match r {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => t
                .parse()
                .map_err(|_| E::custom(format!("bad coupling {t:?}"))),
        }
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        to_repr(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }

    pub mod list {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
            v.iter()
                .map(|&x| to_repr(x))
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
            Vec::<Repr>::deserialize(d)?
                .into_iter()
                .map(from_repr::<D::Error>)
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_units() {
        let cfg = make_config(1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(cfg.lambda_hat(), 0.0);
        assert_eq!(cfg.inertia_hat(), 0.0);
    }

    #[test]
    fn lambda_hat_arithmetic() {
        let cfg = make_config(2.0, 1.0, 1.0, 0.0, 3.0).unwrap();
        assert_eq!(cfg.lambda_hat(), 12.0);
    }

    #[test]
    fn rejects_negative_inertia() {
        let err = make_config(1.0, 1.0, 1.0, -1.0, 0.0).unwrap_err();
        assert!(matches!(
            err,
            Error::Domain {
                field: "classical_inertia",
                ..
            }
        ));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(make_config(f64::NAN, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(make_config(1.0, f64::INFINITY, 1.0, 0.0, 0.0).is_err());
        assert!(make_config(1.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(make_config(1.0, 1.0, 1.0, 0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn model_point_rim_speed() {
        let cfg = make_config(1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(cfg.model_point(0.5, LightSpeed::Forbid).unwrap().beta, 0.5);

        let cfg = make_config(2.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        assert!(cfg.model_point(0.5, LightSpeed::Forbid).is_err());
        assert_eq!(cfg.model_point(0.5, LightSpeed::Allow).unwrap().beta, 1.0);
        let err = cfg.model_point(0.6, LightSpeed::Allow).unwrap_err();
        assert!(matches!(err, Error::Domain { field: "beta", .. }));
    }

    #[test]
    fn light_speed_point_is_not_subluminal() {
        let p = ModelPoint::new_allowing_light_speed(-1.0, 2.0).unwrap();
        assert!(p.require_subluminal().is_err());
    }

    #[test]
    fn physical_conversion() {
        let cfg = make_config(1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(
            to_physical(&cfg, -1.0 / 12.0, "energy").unwrap(),
            -1.0 / 12.0
        );

        let cfg = make_config(4.0, 2.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(
            to_physical(&cfg, -1.0 / 12.0, "energy").unwrap(),
            -1.0 / 24.0
        );

        let cfg = make_config(1.0, 1.0, 3.0, 0.0, 0.0).unwrap();
        let v = to_physical(&cfg, -1.0 / 24.0, "angular_momentum").unwrap();
        assert!((v + 1.0 / 8.0).abs() < 1e-16);

        assert!(to_physical(&cfg, 1.0, "torque").is_err());
    }

    proptest! {
        #[test]
        fn physical_round_trip(
            r in 1e-3f64..1e3, c in 1e-2f64..1e8, h in 1e-3f64..1e3,
            v in -1e3f64..1e3,
        ) {
            let cfg = make_config(r, c, h, 0.0, 0.0).unwrap();
            for kind in [QuantityKind::Energy, QuantityKind::AngularMomentum,
                         QuantityKind::Inertia, QuantityKind::Frequency] {
                let back = cfg.to_dimensionless(cfg.to_physical(v, kind), kind);
                prop_assert!((back - v).abs() <= 4.0 * f64::EPSILON * v.abs().max(1e-300));
            }
        }

        #[test]
        fn dimensionless_groups_scale_invariant(
            r in 0.1f64..10.0, lam in 0.0f64..100.0, inertia in 0.0f64..10.0,
            omega in -0.09f64..0.09, s in 0.1f64..10.0,
        ) {
            let a = make_config(r, 1.0, 1.0, inertia, lam).unwrap();
            let b = make_config(s * r, 1.0, 1.0, s * inertia, lam / (s * s)).unwrap();
            let rel = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(1e-12);
            prop_assert!(rel(a.lambda_hat(), b.lambda_hat()));
            prop_assert!(rel(a.inertia_hat(), b.inertia_hat()));
            let pa = a.model_point(omega, LightSpeed::Forbid).unwrap();
            let pb = b.model_point(omega / s, LightSpeed::Forbid).unwrap();
            prop_assert!((pa.beta - pb.beta).abs() <= 1e-15);
        }
    }
}
