use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use stochwave::estimator::{write_estimates_csv, EstimateRecord};
use stochwave::model::{Kernel, WaveSpeedProfile};
use stochwave::montecarlo::{
    run_field_snapshot, run_study, seed_for_run, ExperimentConfig, ExperimentResult, Study,
};
use stochwave::solver::{read_series_csv, simulate, write_series_csv, MeasurementSeries};

const BUILD_ID: &str = match option_env!("STOCHWAVE_BUILD_ID") {
    Some(id) => id,
    None => concat!("stochwave ", env!("CARGO_PKG_VERSION")),
};

/// Simulation and estimation lab for the stochastic wave equation.
#[derive(Parser, Debug)]
#[command(name = "stochwave", disable_version_flag = true)]
struct Cli {
    /// Experiment configuration (`key = value` per line).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed; overrides `seed` in the configuration.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Results directory; overrides `output`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads; overrides `workers`.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
    /// Use M = 1000 and N = T·M².
    #[arg(long, global = true)]
    paper_scale: bool,
    /// Print the build identifier and kernel constants.
    #[arg(long)]
    version: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One seeded run; writes the measurement series of every probe.
    Simulate {
        /// Run index whose stream seed is used.
        #[arg(long, default_value_t = 0)]
        run: usize,
    },
    /// Estimates from a series file, or from one seeded run.
    Estimate {
        /// Series CSV written by `simulate`; needs --x0 and --delta.
        #[arg(long, value_name = "PATH", requires_all = ["x0", "delta"])]
        series: Option<PathBuf>,
        #[arg(long)]
        x0: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 0)]
        run: usize,
    },
    /// RMSE against δ and its log-log slope.
    Rate,
    /// Standardized-error histograms.
    Normality,
    /// Stddev of the estimator across horizons.
    Horizon,
    /// Empirical coverage of the confidence intervals.
    Coverage,
    /// Monte Carlo moments against the spectral oracles.
    Crosscheck,
    /// Riemann–Lebesgue modulus and equipartition ratio sweep.
    Energy,
    /// Field snapshots of one seeded run (θ_a and θ_b unless --theta is given).
    Snapshot {
        #[arg(long)]
        theta: Option<String>,
    },
}

impl Command {
    fn study(&self) -> Study {
        match self {
            Command::Simulate { .. } | Command::Estimate { .. } => Study::Coverage,
            Command::Rate => Study::Rate,
            Command::Normality => Study::Normality,
            Command::Horizon => Study::TimeHorizon,
            Command::Coverage => Study::Coverage,
            Command::Crosscheck => Study::OracleCrossCheck,
            Command::Energy => Study::Energy,
            Command::Snapshot { .. } => Study::FieldSnapshot,
        }
    }
}

fn load_config(cli: &Cli, command: &Command) -> Result<ExperimentConfig> {
    let study = command.study();
    let lenient = matches!(command, Command::Simulate { .. } | Command::Estimate { .. });
    let mut cfg = match &cli.config {
        Some(path) if lenient => ExperimentConfig::from_file_with_default(path, study)?,
        Some(path) => ExperimentConfig::from_file(path, Some(study))?,
        None => ExperimentConfig::defaults(study),
    };
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output = out.clone();
    }
    if let Some(workers) = cli.workers {
        cfg.workers = workers;
    }
    if cli.paper_scale {
        cfg = cfg.with_paper_scale();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_version() {
    let c = Kernel::standard().constants();
    println!("{BUILD_ID}");
    println!("kernel phi''': |K|^2 = {:.12e}, |K'|^2 = {:.12e}", c.l2_norm_sq, c.h1_norm_sq);
}

fn report(result: &ExperimentResult, dir: &Path) -> Result<()> {
    let written = result
        .write_to(dir)
        .with_context(|| format!("writing results to {}", dir.display()))?;
    for fit in &result.fits {
        println!("x0 = {} T = {}: slope {:.4}", fit.x0, fit.horizon, fit.slope);
    }
    for g in &result.summaries {
        let coverage: Vec<String> = result
            .config
            .alphas
            .iter()
            .zip(&g.coverage)
            .map(|(a, c)| format!("cov[{a}] {c:.3}"))
            .collect();
        println!(
            "x0 = {} delta = {} T = {}: rmse {:.4e}, std ratio {:.3}, scaled mean {:.3}, {}",
            g.x0,
            g.delta,
            g.horizon,
            g.rmse,
            g.std_ratio,
            g.scaled_mean,
            coverage.join(", ")
        );
    }
    for h in &result.horizon_ratios {
        println!(
            "x0 = {} delta = {}: stddev(T={}) / stddev(T={}) = {:.3}",
            h.x0, h.delta, h.horizon, h.reference_horizon, h.ratio
        );
    }
    if !result.crosscheck.is_empty() {
        let worst = result
            .crosscheck
            .iter()
            .map(|r| r.z_score().abs())
            .fold(0.0, f64::max);
        println!("{} moments, max |z| = {worst:.2}", result.crosscheck.len());
    }
    if let Some(last) = result.energy.last() {
        println!(
            "delta = {} t = {}: rl modulus {:.4}, equipartition {:.4}",
            last.delta, last.t, last.rl_modulus, last.equi_ratio
        );
    }
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn simulated_series(cfg: &ExperimentConfig, run: usize) -> Result<Vec<MeasurementSeries>> {
    let grid = cfg.grid()?;
    let probes = cfg.probes(&grid)?;
    Ok(simulate(&cfg.profile, &grid, &probes, seed_for_run(cfg.master_seed, run as u64))?)
}

fn run(cli: Cli) -> Result<()> {
    if cli.version {
        print_version();
        return Ok(());
    }
    let Some(command) = &cli.command else {
        bail!("no command given; see `stochwave --help`");
    };
    let cfg = load_config(&cli, command)?;
    match command {
        Command::Simulate { run } => {
            let dir = cfg.output.join("simulate");
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            for s in simulated_series(&cfg, *run)? {
                let path = dir.join(format!("series_x0={}_delta={}.csv", s.x0, s.delta));
                let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                write_series_csv(&s, std::io::BufWriter::new(file))?;
                println!("wrote {}", path.display());
            }
        }
        Command::Estimate {
            series,
            x0,
            delta,
            run,
        } => {
            let kernel = cfg.kernel.kernel();
            let all = match series {
                Some(path) => {
                    let (x0, delta) = (x0.expect("required by clap"), delta.expect("required by clap"));
                    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
                    let norm = kernel.l2_norm();
                    vec![read_series_csv(BufReader::new(file), x0, delta, 0, norm)?]
                }
                None => simulated_series(&cfg, *run)?,
            };
            let mut records = Vec::new();
            for s in &all {
                for &a in &cfg.alphas {
                    records.push(EstimateRecord::from_series(s, cfg.profile.eval(s.x0), &kernel, a)?);
                }
            }
            write_estimates_csv(std::io::stdout().lock(), &records)?;
            let dir = cfg.output.join("estimate");
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join("estimates.csv");
            write_estimates_csv(File::create(&path)?, &records)?;
            println!("wrote {}", path.display());
        }
        Command::Snapshot { theta } => {
            let profiles = match theta {
                Some(t) => vec![WaveSpeedProfile::parse(t)?],
                None => vec![WaveSpeedProfile::quadratic_bump(), WaveSpeedProfile::piecewise_two_media()],
            };
            report(&run_field_snapshot(&cfg, &profiles)?, &cfg.study_dir())?;
        }
        _ => report(&run_study(&cfg)?, &cfg.study_dir())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
