use std::io::Write;

use super::{augmented_mle, confidence_interval, observed_fisher, ConfidenceInterval};
use crate::model::Kernel;
use crate::solver::MeasurementSeries;
use crate::Result;

pub const ESTIMATE_HEADER: &str = "seed,delta,x0,T,theta_true,theta_hat,fisher,ci_low,ci_high,ci_valid";

/// One estimate with its interval at a single level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateRecord {
    pub seed: u64,
    pub delta: f64,
    pub x0: f64,
    pub horizon: f64,
    pub theta_true: f64,
    pub theta_hat: f64,
    pub fisher: f64,
    pub ci: ConfidenceInterval,
}

impl EstimateRecord {
    pub fn from_series(
        series: &MeasurementSeries,
        theta_true: f64,
        kernel: &Kernel,
        alpha_bar: f64,
    ) -> Result<Self> {
        let theta_hat = augmented_mle(series)?;
        let ci = confidence_interval(theta_hat, series.delta, series.horizon(), kernel, alpha_bar)?;
        Ok(Self {
            seed: series.seed,
            delta: series.delta,
            x0: series.x0,
            horizon: series.horizon(),
            theta_true,
            theta_hat,
            fisher: observed_fisher(series),
            ci,
        })
    }

    /// `δ⁻¹(θ̂ − θ)`.
    pub fn scaled_error(&self) -> f64 {
        (self.theta_hat - self.theta_true) / self.delta
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{}",
            self.seed,
            self.delta,
            self.x0,
            self.horizon,
            self.theta_true,
            self.theta_hat,
            self.fisher,
            self.ci.low,
            self.ci.high,
            self.ci.valid
        )
    }
}

pub fn write_estimates_csv<W: Write>(mut out: W, records: &[EstimateRecord]) -> Result<()> {
    writeln!(out, "{ESTIMATE_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}
