//! The augmented MLE `θ̂_δ = ∫u_δ^Δ dv_δ / ∫(u_δ^Δ)² dt` on one measurement series.

mod decomposition;
mod record;

pub use decomposition::{error_decomposition_diagnostics, ErrorDecomposition};
pub use record::{write_estimates_csv, EstimateRecord, ESTIMATE_HEADER};

use crate::model::{asymptotic_stddev, Kernel};
use crate::solver::MeasurementSeries;
use crate::{Error, Result};
use statrs::distribution::{ContinuousCDF, Normal};

/// Denominators below this are treated as a degenerate series.
pub const DEGENERATE_FISHER: f64 = 1e-300;

/// `Σ_{k<N} u_δ^Δ[k]²·Δt`.
pub fn observed_fisher(series: &MeasurementSeries) -> f64 {
    let n = series.steps();
    series.u_lap[..n].iter().map(|x| x * x).sum::<f64>() * series.dt
}

/// `Σ_{k<N} u_δ^Δ[k]·(v_δ[k+1] − v_δ[k])`, the left-point Itô sum.
pub fn ito_sum(series: &MeasurementSeries) -> f64 {
    series
        .u_lap
        .iter()
        .zip(series.v.windows(2))
        .map(|(u, v)| u * (v[1] - v[0]))
        .sum()
}

/// `θ̂_δ = ito_sum / observed_fisher`.
pub fn augmented_mle(series: &MeasurementSeries) -> Result<f64> {
    if series.steps() < 2 {
        return Err(Error::invalid("series", format!("need N ≥ 2 steps, got {}", series.steps())));
    }
    let fisher = observed_fisher(series);
    if !(fisher >= DEGENERATE_FISHER) {
        return Err(Error::DegenerateSeries { fisher });
    }
    Ok(ito_sum(series) / fisher)
}

/// Standard normal quantile `Φ⁻¹(p)`.
pub fn normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// Two-sided interval at level `1 − ᾱ`; `valid` is false when `θ̂ ≤ 0`, in
/// which case both endpoints are NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub low: f64,
    pub high: f64,
    pub valid: bool,
}

impl ConfidenceInterval {
    pub fn contains(&self, theta: f64) -> bool {
        self.valid && self.low <= theta && theta <= self.high
    }

    pub fn width(&self) -> f64 {
        self.high - self.low
    }
}

/// `θ̂ ∓ δ·√θ̂·2‖K‖/(T‖K'‖)·q_{1−ᾱ/2}`.
pub fn confidence_interval(
    theta_hat: f64,
    delta: f64,
    horizon: f64,
    kernel: &Kernel,
    alpha_bar: f64,
) -> Result<ConfidenceInterval> {
    if !(alpha_bar > 0.0 && alpha_bar < 1.0) {
        return Err(Error::invalid("alpha_bar", format!("must lie in (0,1), got {alpha_bar}")));
    }
    if !(delta > 0.0) {
        return Err(Error::invalid("delta", format!("must be positive, got {delta}")));
    }
    if !(theta_hat > 0.0) {
        return Ok(ConfidenceInterval {
            low: f64::NAN,
            high: f64::NAN,
            valid: false,
        });
    }
    let half = delta * asymptotic_stddev(theta_hat, horizon, kernel)? * normal_quantile(1.0 - alpha_bar / 2.0);
    Ok(ConfidenceInterval {
        low: theta_hat - half,
        high: theta_hat + half,
        valid: true,
    })
}
