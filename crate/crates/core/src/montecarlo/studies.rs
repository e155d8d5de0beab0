use std::time::{Duration, Instant};

use super::aggregate::{summarize, GroupSummary};
use super::batch::{run_batch, BatchPlan, RunRecord};
use super::config::{ExperimentConfig, Study};
use super::runner::run_indexed;
use super::seeds::seed_for_run;
use super::stats::{least_squares, mean_with_se, variance_with_se};
use crate::estimator::observed_fisher;
use crate::model::{Kernel, Localization, WaveSpeedProfile};
use crate::solver::{
    assemble_operator, simulate_with, Grid, SimulationOptions, Snapshot, SnapshotSpec,
};
use crate::spectral::{
    eigendecompose, equipartition_ratio, fisher_expectation_exact, fisher_variance_oracle,
    measurement_covariance, riemann_lebesgue_modulus, DEFAULT_TIME_STEPS,
};
use crate::{Error, Result};

/// Least-squares line through `(log₁₀δ, log₁₀RMSE)` for one `(x₀, T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub x0: f64,
    pub horizon: f64,
    pub slope: f64,
    pub intercept: f64,
}

/// `stddev(θ̂ at T) / stddev(θ̂ at T_ref)` with `T_ref` the first horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonRatio {
    pub x0: f64,
    pub delta: f64,
    pub reference_horizon: f64,
    pub horizon: f64,
    pub ratio: f64,
}

/// One Monte Carlo moment against its spectral oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheckRow {
    pub quantity: String,
    pub x0: f64,
    pub delta: f64,
    pub t: f64,
    pub s: f64,
    pub mc: f64,
    pub mc_se: f64,
    pub oracle: f64,
}

impl CrossCheckRow {
    pub fn z_score(&self) -> f64 {
        (self.mc - self.oracle) / self.mc_se
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRow {
    pub delta: f64,
    pub t: f64,
    /// `|⟨e^{it(−A)^{1/2}}z, z⟩|/‖z‖²` for `z = (ΔK)_δ`.
    pub rl_modulus: f64,
    /// `‖C(t)z‖²/‖z‖²` for `z = K_δ`.
    pub equi_ratio: f64,
}

/// Output of one study. Only the fields relevant to the study are filled.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub summaries: Vec<GroupSummary>,
    /// Per-run records, kept when `keep_runs` is set.
    pub records: Vec<RunRecord>,
    pub fits: Vec<RateFit>,
    pub horizon_ratios: Vec<HorizonRatio>,
    pub crosscheck: Vec<CrossCheckRow>,
    pub energy: Vec<EnergyRow>,
    pub snapshots: Vec<(String, Snapshot)>,
    pub wall_time: Duration,
}

impl ExperimentResult {
    fn empty(config: &ExperimentConfig) -> Self {
        Self {
            config: config.clone(),
            summaries: Vec::new(),
            records: Vec::new(),
            fits: Vec::new(),
            horizon_ratios: Vec::new(),
            crosscheck: Vec::new(),
            energy: Vec::new(),
            snapshots: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn summary(&self, x0: f64, delta: f64, horizon: f64) -> Option<&GroupSummary> {
        self.summaries
            .iter()
            .find(|g| g.x0 == x0 && g.delta == delta && (g.horizon - horizon).abs() < 1e-9)
    }
}

/// Dispatches on `config.study`.
pub fn run_study(config: &ExperimentConfig) -> Result<ExperimentResult> {
    match config.study {
        Study::Rate => run_rate_study(config),
        Study::Normality => run_normality_study(config),
        Study::TimeHorizon => run_time_horizon_study(config),
        Study::Coverage => run_coverage_study(config),
        Study::OracleCrossCheck => run_oracle_crosscheck(config),
        Study::Energy => run_energy_sweep(config),
        Study::FieldSnapshot => run_field_snapshot(config, std::slice::from_ref(&config.profile)),
    }
}

fn estimate_batch(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let start = Instant::now();
    let records = run_batch(config)?;
    let mut result = ExperimentResult::empty(config);
    result.summaries = summarize(config, &records)?;
    if config.keep_runs {
        result.records = records;
    }
    result.wall_time = start.elapsed();
    Ok(result)
}

/// RMSE per `δ` and the log-log slope per `(x₀, T)`.
pub fn run_rate_study(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let (low, high) = config
        .deltas
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &d| (l.min(d), h.max(d)));
    if config.deltas.len() < 4 || high < 4.0 * low {
        return Err(Error::Config(
            "the rate study needs at least 4 values of delta spanning a factor of 4".into(),
        ));
    }
    let mut result = estimate_batch(config)?;
    for &x0 in &config.x0 {
        for &horizon in &config.horizons {
            let cells: Vec<&GroupSummary> = result
                .summaries
                .iter()
                .filter(|g| g.x0 == x0 && (g.horizon - horizon).abs() < 1e-9)
                .collect();
            let xs: Vec<f64> = cells.iter().map(|g| g.delta.log10()).collect();
            let ys: Vec<f64> = cells.iter().map(|g| g.rmse.log10()).collect();
            let (slope, intercept) = least_squares(&xs, &ys);
            result.fits.push(RateFit {
                x0,
                horizon,
                slope,
                intercept,
            });
        }
    }
    Ok(result)
}

/// Standardized errors `δ⁻¹(θ̂ − θ)` with their limit stddev.
pub fn run_normality_study(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let mut result = estimate_batch(config)?;
    result.horizon_ratios = horizon_ratios(&result.summaries, config);
    Ok(result)
}

/// Stddev of `θ̂` across horizons; the limit predicts `stddev ∝ T⁻¹`.
pub fn run_time_horizon_study(config: &ExperimentConfig) -> Result<ExperimentResult> {
    if config.horizons.len() < 2 {
        return Err(Error::Config("the time-horizon study needs at least two values of T".into()));
    }
    run_normality_study(config)
}

/// Empirical coverage per `(δ, ᾱ)` over the valid intervals; runs with an
/// undefined interval are counted separately.
pub fn run_coverage_study(config: &ExperimentConfig) -> Result<ExperimentResult> {
    estimate_batch(config)
}

fn horizon_ratios(summaries: &[GroupSummary], config: &ExperimentConfig) -> Vec<HorizonRatio> {
    let per_delta = config.horizons.len();
    summaries
        .chunks(per_delta)
        .flat_map(|cells| {
            let reference = &cells[0];
            cells[1..].iter().map(move |g| HorizonRatio {
                x0: g.x0,
                delta: g.delta,
                reference_horizon: reference.horizon,
                horizon: g.horizon,
                ratio: g.stddev / reference.stddev,
            })
        })
        .collect()
}

/// Number of time points per axis of the covariance grid.
pub const CROSSCHECK_TIMES: usize = 5;

struct CrossRun {
    /// Per probe: `δ²I_δ` and `u_δ^Δ` at the grid times.
    fisher: Vec<f64>,
    samples: Vec<[f64; CROSSCHECK_TIMES]>,
}

/// Monte Carlo moments of `δ²I_δ` and of `u_δ^Δ` on a `5×5` time grid
/// against the spectral oracles, at the largest configured horizon.
pub fn run_oracle_crosscheck(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let start = Instant::now();
    let mut run_config = config.clone();
    run_config.horizons = vec![config.max_horizon()];
    let plan = BatchPlan::new(&run_config)?;
    let steps = plan.grid.steps();
    let indices: Vec<usize> = (1..=CROSSCHECK_TIMES)
        .map(|i| (i * steps) / CROSSCHECK_TIMES)
        .collect();
    let runs = run_indexed(config.workers, config.runs, |i| {
        let (_, series) = plan.simulate(i)?;
        Ok(CrossRun {
            fisher: series
                .iter()
                .map(|s| s.delta * s.delta * observed_fisher(s))
                .collect(),
            samples: series
                .iter()
                .map(|s| std::array::from_fn(|j| s.u_lap[indices[j]]))
                .collect(),
        })
    })?;

    let operator = assemble_operator(&config.profile, &plan.grid)?;
    let spectrum = eigendecompose(&operator, plan.grid.dx())?;
    let horizon = plan.grid.horizon();
    let times: Vec<f64> = indices.iter().map(|&k| plan.grid.time(k)).collect();
    let mut result = ExperimentResult::empty(config);
    for (p, probe) in plan.probes.iter().enumerate() {
        let row = |quantity: &str, t: f64, s: f64, (mc, mc_se): (f64, f64), oracle: f64| {
            CrossCheckRow {
                quantity: quantity.into(),
                x0: probe.x0(),
                delta: probe.delta(),
                t,
                s,
                mc,
                mc_se,
                oracle,
            }
        };
        let fisher: Vec<f64> = runs.iter().map(|r| r.fisher[p]).collect();
        result.crosscheck.push(row(
            "fisher_mean",
            horizon,
            horizon,
            mean_with_se(&fisher),
            fisher_expectation_exact(&spectrum, probe, horizon)?,
        ));
        result.crosscheck.push(row(
            "fisher_variance",
            horizon,
            horizon,
            variance_with_se(&fisher),
            fisher_variance_oracle(&spectrum, probe, horizon, DEFAULT_TIME_STEPS)?,
        ));
        let cov = measurement_covariance(&spectrum, probe)?;
        for i in 0..CROSSCHECK_TIMES {
            for j in i..CROSSCHECK_TIMES {
                let products: Vec<f64> = runs
                    .iter()
                    .map(|r| r.samples[p][i] * r.samples[p][j])
                    .collect();
                result.crosscheck.push(row(
                    "covariance",
                    times[j],
                    times[i],
                    mean_with_se(&products),
                    cov.covariance(times[j], times[i]),
                ));
            }
        }
    }
    result.wall_time = start.elapsed();
    Ok(result)
}

/// `K_δ` (or its `order`-th derivative, unscaled) at the interior nodes of `grid`.
pub fn localized_kernel(kernel: &Kernel, grid: &Grid, x0: f64, delta: f64, order: usize) -> Result<Vec<f64>> {
    let loc = Localization::new(delta, x0)?;
    Ok((0..grid.interior_nodes())
        .map(|j| loc.apply(|y| kernel.derivative(order, y), grid.node(j)))
        .collect())
}

/// Riemann–Lebesgue modulus and equipartition ratio over the `δ × t` grid,
/// where `T` lists the times.
pub fn run_energy_sweep(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let start = Instant::now();
    config.validate()?;
    let grid = Grid::with_default_steps(config.cells, 1.0)?;
    let operator = assemble_operator(&config.profile, &grid)?;
    let spectrum = eigendecompose(&operator, grid.dx())?;
    let kernel = config.kernel.kernel();
    let mut result = ExperimentResult::empty(config);
    for &x0 in &config.x0 {
        for &delta in &config.deltas {
            let z = localized_kernel(&kernel, &grid, x0, delta, 0)?;
            let w = localized_kernel(&kernel, &grid, x0, delta, 2)?;
            let w_norm = spectrum.norm_sq(&w);
            for &t in &config.horizons {
                result.energy.push(EnergyRow {
                    delta,
                    t,
                    rl_modulus: riemann_lebesgue_modulus(&spectrum, t, &w) / w_norm,
                    equi_ratio: equipartition_ratio(&spectrum, t, &z),
                });
            }
        }
    }
    result.wall_time = start.elapsed();
    Ok(result)
}

/// One seeded run per profile with downsampled field histories up to the
/// largest horizon. All profiles share the stream seed of run 0.
pub fn run_field_snapshot(
    config: &ExperimentConfig,
    profiles: &[WaveSpeedProfile],
) -> Result<ExperimentResult> {
    let start = Instant::now();
    config.validate()?;
    let seed = seed_for_run(config.master_seed, 0);
    let options = SimulationOptions {
        snapshot: Some(SnapshotSpec::default()),
        ..SimulationOptions::default()
    };
    let mut result = ExperimentResult::empty(config);
    for profile in profiles {
        let mut local = config.clone();
        local.profile = profile.clone();
        let grid = local.grid()?;
        let out = simulate_with(profile, &grid, &[], seed, &options)?;
        let snapshot = out.snapshot.expect("snapshot was requested");
        result.snapshots.push((profile.name(), snapshot));
    }
    result.wall_time = start.elapsed();
    Ok(result)
}
