//! Seeded Monte Carlo studies of the augmented MLE.
//!
//! Run `i` of a study draws its noise from `seed_for_run(master_seed, i)` and
//! estimates at every configured `(x₀, δ, T)` from one simulation, with shorter
//! horizons taken as prefixes of the longest. Results are merged in run order,
//! so every aggregate is bitwise independent of the worker count.

mod aggregate;
mod batch;
mod config;
mod output;
mod runner;
mod seeds;
mod stats;
mod studies;

pub use aggregate::{summarize, GroupSummary};
pub use batch::{rerun, run_batch, RunRecord};
pub use config::{ExperimentConfig, KernelChoice, Study, PAPER_SCALE_CELLS};
pub use runner::run_indexed;
pub use seeds::seed_for_run;
pub use stats::{
    histogram, least_squares, mean_and_stddev, mean_with_se, rmse, variance_with_se,
    ErrorAccumulator,
};
pub use studies::{
    localized_kernel, run_coverage_study, run_energy_sweep, run_field_snapshot,
    run_normality_study, run_oracle_crosscheck, run_rate_study, run_study,
    run_time_horizon_study, CrossCheckRow, EnergyRow, ExperimentResult, HorizonRatio, RateFit,
    CROSSCHECK_TIMES,
};
