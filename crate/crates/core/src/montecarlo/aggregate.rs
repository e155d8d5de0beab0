use super::batch::RunRecord;
use super::config::ExperimentConfig;
use super::stats::ErrorAccumulator;
use crate::model::asymptotic_stddev;
use crate::Result;

/// Aggregates of one `(x₀, δ, T)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub x0: f64,
    pub delta: f64,
    pub horizon: f64,
    pub runs: usize,
    pub theta_true: f64,
    /// Mean and sample stddev of `θ̂`.
    pub mean: f64,
    pub stddev: f64,
    pub rmse: f64,
    pub rmse_se: f64,
    /// Limit stddev of `δ⁻¹(θ̂ − θ)`.
    pub asymptotic_stddev: f64,
    /// `stddev/δ` over `asymptotic_stddev`.
    pub std_ratio: f64,
    /// Mean of `δ⁻¹(θ̂ − θ)`.
    pub scaled_mean: f64,
    /// Fraction of valid intervals containing `θ(x₀)`, per `ᾱ`.
    pub coverage: Vec<f64>,
    /// Runs with `θ̂ ≤ 0`, whose interval is undefined.
    pub invalid_ci: usize,
}

/// Number of `(x₀, δ, T)` cells per run.
pub(crate) fn cells_per_run(config: &ExperimentConfig) -> usize {
    config.x0.len() * config.deltas.len() * config.horizons.len()
}

/// Streams the records in run order; cell `j` collects records `j, j+G, j+2G, …`.
pub fn summarize(config: &ExperimentConfig, records: &[RunRecord]) -> Result<Vec<GroupSummary>> {
    let cells = cells_per_run(config);
    let kernel = config.kernel.kernel();
    let mut out = Vec::with_capacity(cells);
    for j in 0..cells {
        let mut acc = ErrorAccumulator::default();
        let mut covered = vec![0usize; config.alphas.len()];
        let mut invalid = 0;
        let mut scaled_sum = 0.0;
        let first = &records[j];
        for r in records.iter().skip(j).step_by(cells) {
            acc.push(r.theta_hat, r.theta_true);
            scaled_sum += r.scaled_error();
            if !r.intervals.iter().all(|ci| ci.valid) {
                invalid += 1;
            }
            for (c, ci) in covered.iter_mut().zip(&r.intervals) {
                *c += usize::from(ci.contains(r.theta_true));
            }
        }
        let n = acc.count();
        let limit = asymptotic_stddev(first.theta_true, first.horizon, &kernel)?;
        out.push(GroupSummary {
            x0: first.x0,
            delta: first.delta,
            horizon: first.horizon,
            runs: n,
            theta_true: first.theta_true,
            mean: acc.mean(),
            stddev: acc.stddev(),
            rmse: acc.rmse(),
            rmse_se: acc.rmse_se(),
            asymptotic_stddev: limit,
            std_ratio: acc.stddev() / first.delta / limit,
            scaled_mean: scaled_sum / n as f64,
            coverage: covered
                .iter()
                .map(|&c| c as f64 / (n - invalid) as f64)
                .collect(),
            invalid_ci: invalid,
        });
    }
    Ok(out)
}
