use super::config::ExperimentConfig;
use super::runner::run_indexed;
use super::seeds::seed_for_run;
use crate::estimator::{augmented_mle, confidence_interval, observed_fisher, ConfidenceInterval};
use crate::model::Kernel;
use crate::solver::{simulate, Grid, MeasurementProbe, MeasurementSeries};
use crate::Result;

/// One estimate of one run at one `(x₀, δ, T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub x0: f64,
    pub delta: f64,
    pub horizon: f64,
    pub theta_true: f64,
    pub theta_hat: f64,
    pub fisher: f64,
    /// One interval per configured `ᾱ`, in config order.
    pub intervals: Vec<ConfidenceInterval>,
}

impl RunRecord {
    /// `δ⁻¹(θ̂ − θ(x₀))`.
    pub fn scaled_error(&self) -> f64 {
        (self.theta_hat - self.theta_true) / self.delta
    }
}

/// Immutable per-study state shared by all workers.
pub(crate) struct BatchPlan<'a> {
    pub config: &'a ExperimentConfig,
    pub grid: Grid,
    pub probes: Vec<MeasurementProbe>,
    pub kernel: Kernel,
    /// Step counts of the configured horizons.
    pub prefixes: Vec<usize>,
}

impl<'a> BatchPlan<'a> {
    pub fn new(config: &'a ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let grid = config.grid()?;
        let probes = config.probes(&grid)?;
        let prefixes = config
            .horizons
            .iter()
            .map(|&t| config.steps_for(&grid, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            config,
            grid,
            probes,
            kernel: config.kernel.kernel(),
            prefixes,
        })
    }

    pub fn simulate(&self, run: usize) -> Result<(u64, Vec<MeasurementSeries>)> {
        let seed = seed_for_run(self.config.master_seed, run as u64);
        Ok((seed, simulate(&self.config.profile, &self.grid, &self.probes, seed)?))
    }

    /// Records of run `run` in `x₀`-major, `δ`, then `T` order.
    pub fn run(&self, run: usize) -> Result<Vec<RunRecord>> {
        let (seed, series) = self.simulate(run)?;
        let mut out = Vec::with_capacity(series.len() * self.prefixes.len());
        for s in &series {
            let theta_true = self.config.profile.eval(s.x0);
            for &steps in &self.prefixes {
                let cut;
                let s = if steps == s.steps() {
                    s
                } else {
                    cut = s.prefix(steps);
                    &cut
                };
                let theta_hat = augmented_mle(s)?;
                let intervals = self
                    .config
                    .alphas
                    .iter()
                    .map(|&a| confidence_interval(theta_hat, s.delta, s.horizon(), &self.kernel, a))
                    .collect::<Result<Vec<_>>>()?;
                out.push(RunRecord {
                    run,
                    seed,
                    x0: s.x0,
                    delta: s.delta,
                    horizon: s.horizon(),
                    theta_true,
                    theta_hat,
                    fisher: observed_fisher(s),
                    intervals,
                });
            }
        }
        Ok(out)
    }
}

/// All records of all runs, ordered by run index and then as in [`rerun`].
pub fn run_batch(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    let plan = BatchPlan::new(config)?;
    let per_run = run_indexed(config.workers, config.runs, |i| plan.run(i))?;
    Ok(per_run.into_iter().flatten().collect())
}

/// Re-executes run `index` of `config` in isolation.
pub fn rerun(config: &ExperimentConfig, index: usize) -> Result<Vec<RunRecord>> {
    BatchPlan::new(config)?.run(index)
}
