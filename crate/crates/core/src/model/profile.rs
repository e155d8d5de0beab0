use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Grid used to certify positivity of a profile at construction.
const POSITIVITY_GRID: usize = 10_000;

#[derive(Clone)]
enum Kind {
    Constant(f64),
    QuadraticBump,
    PiecewiseTwoMedia,
    Custom {
        name: String,
        eval: ScalarFn,
        derivative: Option<ScalarFn>,
    },
}

/// Spatially varying wave speed `θ: [0,1] → (0,∞)`.
///
/// Every constructor checks strict positivity on a uniform grid of 10⁴ + 1
/// points, so a profile that exists is safe to hand to the solver.
#[derive(Clone)]
pub struct WaveSpeedProfile {
    kind: Kind,
}

impl WaveSpeedProfile {
    pub fn constant(value: f64) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveWaveSpeed { min: value, at: 0.0 });
        }
        Ok(Self {
            kind: Kind::Constant(value),
        })
    }

    /// `θ_a(x) = 4x(1−x) + 0.01`.
    pub fn quadratic_bump() -> Self {
        Self {
            kind: Kind::QuadraticBump,
        }
    }

    /// `θ_b(x) = 1/2` on `(0, 1/2]` and `1` on `(1/2, 1)`.
    pub fn piecewise_two_media() -> Self {
        Self {
            kind: Kind::PiecewiseTwoMedia,
        }
    }

    pub fn custom<F>(name: impl Into<String>, eval: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::checked(Kind::Custom {
            name: name.into(),
            eval: Arc::new(eval),
            derivative: None,
        })
    }

    pub fn custom_smooth<F, D>(name: impl Into<String>, eval: F, derivative: D) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::checked(Kind::Custom {
            name: name.into(),
            eval: Arc::new(eval),
            derivative: Some(Arc::new(derivative)),
        })
    }

    fn checked(kind: Kind) -> Result<Self> {
        let profile = Self { kind };
        let (min, at) = profile.grid_min();
        if !(min.is_finite() && min > 0.0) {
            return Err(Error::NonPositiveWaveSpeed { min, at });
        }
        Ok(profile)
    }

    fn grid_min(&self) -> (f64, f64) {
        (0..=POSITIVITY_GRID)
            .map(|i| {
                let x = i as f64 / POSITIVITY_GRID as f64;
                (self.eval(x), x)
            })
            .fold((f64::INFINITY, 0.0), |acc, (v, x)| {
                if v < acc.0 || v.is_nan() {
                    (v, x)
                } else {
                    acc
                }
            })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Constant(c) => *c,
            Kind::QuadraticBump => 4.0 * x * (1.0 - x) + 0.01,
            Kind::PiecewiseTwoMedia => {
                if x <= 0.5 {
                    0.5
                } else {
                    1.0
                }
            }
            Kind::Custom { eval, .. } => eval(x),
        }
    }

    /// `θ'(x₀)`, or an error when the profile is not differentiable there.
    pub fn derivative_at(&self, x0: f64) -> Result<f64> {
        match &self.kind {
            Kind::Constant(_) => Ok(0.0),
            Kind::QuadraticBump => Ok(4.0 - 8.0 * x0),
            Kind::PiecewiseTwoMedia => {
                if x0 == 0.5 {
                    Err(self.not_differentiable(x0))
                } else {
                    Ok(0.0)
                }
            }
            Kind::Custom { derivative, .. } => derivative
                .as_ref()
                .map(|d| d(x0))
                .ok_or_else(|| self.not_differentiable(x0)),
        }
    }

    fn not_differentiable(&self, x0: f64) -> Error {
        Error::NotDifferentiable {
            profile: self.name(),
            x0,
        }
    }

    /// Maximum over the positivity grid; used for the CFL bound.
    pub fn max_on_grid(&self) -> f64 {
        (0..=POSITIVITY_GRID)
            .map(|i| self.eval(i as f64 / POSITIVITY_GRID as f64))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn constant_value(&self) -> Option<f64> {
        match self.kind {
            Kind::Constant(c) => Some(c),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            Kind::Constant(c) => format!("const:{c}"),
            Kind::QuadraticBump => "a".to_string(),
            Kind::PiecewiseTwoMedia => "b".to_string(),
            Kind::Custom { name, .. } => name.clone(),
        }
    }

    /// Parses `a`, `b`, `const:<value>` or a bare positive number.
    pub fn parse(spec: &str) -> Result<Self> {
        let s = spec.trim();
        match s {
            "a" | "theta_a" | "quadratic" => Ok(Self::quadratic_bump()),
            "b" | "theta_b" | "piecewise" => Ok(Self::piecewise_two_media()),
            _ => {
                let value = s.strip_prefix("const:").unwrap_or(s);
                let c: f64 = value
                    .parse()
                    .map_err(|_| Error::Config(format!("unknown wave speed profile `{spec}`")))?;
                Self::constant(c)
            }
        }
    }
}

impl fmt::Debug for WaveSpeedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WaveSpeedProfile({})", self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let a = WaveSpeedProfile::quadratic_bump();
        assert_eq!(a.eval(0.5), 1.01);
        assert!((a.eval(0.6) - 0.97).abs() < 1e-15);
        assert!((a.derivative_at(0.6).unwrap() + 0.8).abs() < 1e-15);

        let b = WaveSpeedProfile::piecewise_two_media();
        assert_eq!(b.eval(0.25), 0.5);
        assert_eq!(b.eval(0.5), 0.5);
        assert_eq!(b.eval(0.75), 1.0);
        assert_eq!(b.derivative_at(0.25).unwrap(), 0.0);
        assert!(matches!(
            b.derivative_at(0.5),
            Err(Error::NotDifferentiable { .. })
        ));
    }

    #[test]
    fn positivity_is_enforced() {
        assert!(WaveSpeedProfile::constant(0.0).is_err());
        assert!(WaveSpeedProfile::constant(-1.0).is_err());
        assert!(WaveSpeedProfile::custom("dips", |x| x - 0.3).is_err());
        assert!(WaveSpeedProfile::custom("nan", |_| f64::NAN).is_err());
        assert!(WaveSpeedProfile::custom("ok", |x| 1.0 + x).is_ok());
    }

    #[test]
    fn custom_without_derivative_is_not_differentiable() {
        let p = WaveSpeedProfile::custom("lin", |x| 1.0 + x).unwrap();
        assert!(p.derivative_at(0.3).is_err());
        let q = WaveSpeedProfile::custom_smooth("lin", |x| 1.0 + x, |_| 1.0).unwrap();
        assert_eq!(q.derivative_at(0.3).unwrap(), 1.0);
    }

    #[test]
    fn parse_profiles() {
        assert_eq!(WaveSpeedProfile::parse("a").unwrap().name(), "a");
        assert_eq!(WaveSpeedProfile::parse("b").unwrap().name(), "b");
        assert_eq!(
            WaveSpeedProfile::parse("const:0.2").unwrap().constant_value(),
            Some(0.2)
        );
        assert!(WaveSpeedProfile::parse("zzz").is_err());
    }
}
