//! Acceptance run: one `PASS`/`FAIL` line per criterion, preceded by the
//! measured values. `ACCEPTANCE_ONLY=1,5` restricts the run to some criteria.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use stochwave::estimator::error_decomposition_diagnostics;
use stochwave::model::{asymptotic_bias, Kernel, QuadratureRule, WaveSpeedProfile};
use stochwave::montecarlo::*;
use stochwave::solver::{
    assemble_operator, simulate, simulate_with, Grid, LaplaceWeights, MeasurementProbe,
    SimulationOptions, SolverState, SymplecticEuler,
};
use stochwave::spectral::*;

struct Check {
    label: String,
    value: f64,
    ok: bool,
}

fn check(label: impl Into<String>, value: f64, ok: bool) -> Check {
    Check {
        label: label.into(),
        value,
        ok,
    }
}

fn within(value: f64, low: f64, high: f64) -> bool {
    (low..=high).contains(&value)
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn theta_a() -> WaveSpeedProfile {
    WaveSpeedProfile::quadratic_bump()
}

fn unit() -> WaveSpeedProfile {
    WaveSpeedProfile::constant(1.0).unwrap()
}

fn spectrum(profile: &WaveSpeedProfile, m: usize) -> (Grid, SpectralDecomposition) {
    let g = Grid::with_default_steps(m, 1.0).unwrap();
    let s = eigendecompose(&assemble_operator(profile, &g).unwrap(), g.dx()).unwrap();
    (g, s)
}

fn probe(g: &Grid, x0: f64, delta: f64) -> MeasurementProbe {
    MeasurementProbe::new(&Kernel::standard(), g, x0, delta, LaplaceWeights::Stencil).unwrap()
}

fn localized(g: &Grid, x0: f64, delta: f64, order: usize) -> Vec<f64> {
    localized_kernel(&Kernel::standard(), g, x0, delta, order).unwrap()
}

fn rate() -> Vec<Check> {
    let mut cfg = ExperimentConfig::defaults(Study::Rate);
    cfg.profile = theta_a();
    cfg.x0 = vec![0.6];
    cfg.deltas = vec![0.5, 0.35, 0.25, 0.18, 0.12, 0.08];
    cfg.horizons = vec![1.0];
    cfg.cells = 256;
    cfg.runs = 200;
    cfg.truncate_support = true;
    cfg.workers = workers();
    let r = run_rate_study(&cfg).unwrap();
    for g in &r.summaries {
        println!("    delta = {:<5} rmse = {:.4e} ± {:.1e}", g.delta, g.rmse, g.rmse_se);
    }
    let slope = r.fits[0].slope;
    vec![check("log-log RMSE slope in [0.75, 1.25]", slope, within(slope, 0.75, 1.25))]
}

/// θ_a, x₀ = 0.6, δ ∈ {0.2, 0.1, 0.09, 0.08}, T ∈ {1, 2}, R = 500.
fn shared_batch() -> ExperimentResult {
    let mut cfg = ExperimentConfig::defaults(Study::Coverage);
    cfg.profile = theta_a();
    cfg.x0 = vec![0.6];
    cfg.deltas = vec![0.2, 0.1, 0.09, 0.08];
    cfg.horizons = vec![1.0, 2.0];
    cfg.cells = 256;
    cfg.runs = 500;
    cfg.alphas = vec![0.1, 0.05];
    cfg.workers = workers();
    run_coverage_study(&cfg).unwrap()
}

fn coverage(batch: &ExperimentResult) -> Vec<Check> {
    let at = |delta: f64| batch.summary(0.6, delta, 1.0).unwrap();
    for g in batch.summaries.iter().filter(|g| g.horizon == 1.0) {
        println!(
            "    delta = {:<4} coverage(0.1) = {:.3} coverage(0.05) = {:.3} invalid = {}",
            g.delta, g.coverage[0], g.coverage[1], g.invalid_ci
        );
    }
    let c1 = at(0.1).coverage[0];
    let c2 = at(0.09).coverage[1];
    let c3 = at(0.2).coverage[0].min(at(0.2).coverage[1]);
    vec![
        check("delta=0.1 alpha=0.1 coverage in [0.87, 0.97]", c1, within(c1, 0.87, 0.97)),
        check("delta=0.09 alpha=0.05 coverage in [0.94, 1.0]", c2, within(c2, 0.94, 1.0)),
        check("delta=0.2 coverage >= 0.98 at both levels", c3, c3 >= 0.98),
    ]
}

fn variance(batch: &ExperimentResult) -> Vec<Check> {
    let one = batch.summary(0.6, 0.08, 1.0).unwrap();
    let two = batch.summary(0.6, 0.08, 2.0).unwrap();
    println!(
        "    delta = 0.08: scaled mean = {:.3}, scaled stddev = {:.4} (limit {:.4})",
        one.scaled_mean,
        one.stddev / one.delta,
        one.asymptotic_stddev
    );
    let ratio = two.stddev / one.stddev;
    vec![
        check("stddev ratio to the limit in [0.8, 1.25]", one.std_ratio, within(one.std_ratio, 0.8, 1.25)),
        check("stddev(T=2)/stddev(T=1) in [0.4, 0.6]", ratio, within(ratio, 0.4, 0.6)),
    ]
}

fn fisher() -> Vec<Check> {
    let h1 = Kernel::standard().constants().h1_norm_sq;
    let mut out = Vec::new();
    for (name, profile, x0) in [("theta=1", unit(), 0.5), ("theta_a", theta_a(), 0.6)] {
        let (g, s) = spectrum(&profile, 2048);
        let limit = h1 / (4.0 * profile.eval(x0));
        let v = fisher_expectation_oracle(&s, &probe(&g, x0, 0.02), 1.0, DEFAULT_TIME_STEPS).unwrap();
        let rel = (v - limit).abs() / limit;
        out.push(check(format!("{name}: oracle within 10% of the limit (rel err)"), rel, rel <= 0.1));
    }
    let mut cfg = ExperimentConfig::defaults(Study::OracleCrossCheck);
    cfg.profile = theta_a();
    cfg.x0 = vec![0.6];
    cfg.deltas = vec![0.1];
    cfg.horizons = vec![1.0];
    cfg.cells = 256;
    cfg.runs = 2000;
    cfg.workers = workers();
    let r = run_oracle_crosscheck(&cfg).unwrap();
    let worst = r.crosscheck.iter().map(|c| c.z_score().abs()).fold(0.0, f64::max);
    let mean = r.crosscheck.iter().find(|c| c.quantity == "fisher_mean").unwrap();
    println!(
        "    MC E[delta^2 I] = {:.5e} ± {:.1e}, oracle {:.5e}; max |z| over {} moments = {:.2}",
        mean.mc,
        mean.mc_se,
        mean.oracle,
        r.crosscheck.len(),
        worst
    );
    let z = mean.z_score();
    out.push(check("MC mean within 3 standard errors of the oracle (z)", z, z.abs() <= 3.0));
    out
}

fn fourier() -> Vec<Check> {
    let k = Kernel::standard();
    let q = FourierQuadrature::default();
    let limit = k.constants().h1_norm_sq / 4.0;
    let v = fourier_fisher_unbounded(1.0, 0.01, 1.0, &k, q).unwrap();
    let rel = (v - limit).abs() / limit;
    let (theta0, delta) = (0.2, 0.04);
    let (g, s) = spectrum(&unit(), 2048);
    let bounded = fisher_expectation_exact(&s.scaled(theta0), &probe(&g, 0.5, delta), 1.0).unwrap();
    let unbounded = fourier_fisher_unbounded(theta0, delta, 1.0, &k, q).unwrap();
    let agree = (bounded - unbounded).abs() / unbounded;
    vec![
        check("whole-line oracle within 2% of T^2|K'|^2/4 (rel err)", rel, rel <= 0.02),
        check("bounded vs whole-line at theta0=0.2 delta=0.04 (rel err)", agree, agree <= 1e-2),
    ]
}

fn energy() -> Vec<Check> {
    let (g, s) = spectrum(&unit(), 2048);
    let z = localized(&g, 0.5, 0.01, 0);
    let equi = equipartition_ratio(&s, 0.4, &z);
    let w = localized(&g, 0.5, 0.02, 2);
    let rl = riemann_lebesgue_modulus(&s, 0.3, &w) / s.norm_sq(&w);
    let (_, small) = spectrum(&theta_a(), 256);
    let e = small.eigenvector(5).to_vec();
    let worst = [0.5, 3.0, 40.0, 1e3]
        .iter()
        .map(|&t| (riemann_lebesgue_modulus(&small, t, &e) - small.norm_sq(&e)).abs())
        .fold(0.0, f64::max);
    vec![
        check("equipartition ratio at delta=0.01 t=0.4 in [0.45, 0.55]", equi, within(equi, 0.45, 0.55)),
        check("RL modulus at delta=0.02 t=0.3 <= 0.1 |z|^2", rl, rl <= 0.1),
        check("single eigenvector keeps |z|^2 (max deviation)", worst, worst <= 1e-10),
    ]
}

fn properties() -> Vec<Check> {
    let mut out = Vec::new();

    let (_, s) = spectrum(&theta_a(), 512);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
    let z: Vec<f64> = (0..s.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let unitarity = [0.1, 1.7, 12.0]
        .iter()
        .map(|&t| unitarity_check(&s, t, &z).abs() / s.norm_sq(&z))
        .fold(0.0, f64::max);
    out.push(check("unitarity identity (relative)", unitarity, unitarity <= 1e-10));

    let g = Grid::with_default_steps(128, 1.0).unwrap();
    let probes = vec![probe(&g, 0.6, 0.2), probe(&g, 0.3, 0.25)];
    let mut worst: f64 = 0.0;
    for series in simulate(&theta_a(), &g, &probes, 99).unwrap() {
        let scale = series.u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for k in 0..series.steps() {
            worst = worst.max((series.u[k + 1] - series.u[k] - series.dt * series.v[k]).abs() / scale);
        }
    }
    out.push(check("u[k+1] - u[k] = dt v[k] (max relative deviation)", worst, worst <= 1e-12));

    let mut drift: f64 = 0.0;
    for profile in [unit(), theta_a()] {
        let g = Grid::with_default_steps(256, 1.0).unwrap();
        let op = assemble_operator(&profile, &g).unwrap();
        let scheme = SymplecticEuler::new(op, g.dt(), g.dx());
        let n = g.interior_nodes();
        let mut st = SolverState::zero(n);
        st.u = (0..n).map(|j| (PI * g.node(j)).sin()).collect();
        let e0 = st.energy(scheme.operator(), g.dx());
        let zeros = vec![0.0; n];
        for k in 0..g.steps() {
            scheme.step(&mut st, &zeros);
            if k % 64 == 0 || k + 1 == g.steps() {
                drift = drift.max((st.energy(scheme.operator(), g.dx()) - e0).abs() / e0);
            }
        }
    }
    out.push(check("noiseless energy drift over [0,1] (relative)", drift, drift <= 1e-3));

    let rule = QuadratureRule::default();
    let bias = [0.3, 0.6, 0.75]
        .iter()
        .map(|&x0| asymptotic_bias(&Kernel::standard(), &theta_a(), x0, &rule).unwrap().abs())
        .fold(0.0, f64::max);
    out.push(check("asymptotic bias of phi''' (normalized)", bias, bias <= 1e-8));

    let options = SimulationOptions {
        record_diagnostics: true,
        ..SimulationOptions::default()
    };
    let mut residual: f64 = 0.0;
    for seed in 0..4 {
        let series = simulate_with(&theta_a(), &g, &probes, seed, &options).unwrap().series;
        for s in &series {
            let d = error_decomposition_diagnostics(s, &theta_a()).unwrap();
            residual = residual.max(d.residual().abs());
        }
    }
    out.push(check("error decomposition residual", residual, residual <= 1e-8));

    let mut cfg = ExperimentConfig::defaults(Study::Coverage);
    cfg.cells = 64;
    cfg.deltas = vec![0.4, 0.35];
    cfg.x0 = vec![0.5];
    cfg.horizons = vec![0.5, 1.0];
    cfg.runs = 40;
    cfg.workers = 1;
    let a = run_coverage_study(&cfg).unwrap();
    cfg.workers = 4;
    let b = run_coverage_study(&cfg).unwrap();
    let same = a.summary_csv() == b.summary_csv() && a.runs_csv() == b.runs_csv();
    out.push(check("aggregates identical for 1 and 4 workers", f64::from(u8::from(same)), same));
    out
}

fn main() -> ExitCode {
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let wanted = |k: usize| only.as_ref().is_none_or(|o| o.contains(&k));
    let start = Instant::now();
    let mut batch = None;
    let mut batch_for = |k: usize| {
        if batch.is_none() && (wanted(2) || wanted(3)) && (k == 2 || k == 3) {
            batch = Some(shared_batch());
        }
        batch.clone()
    };

    let criteria: [(usize, &str); 7] = [
        (1, "rate reproduction"),
        (2, "coverage table"),
        (3, "asymptotic variance and T-dependence"),
        (4, "Fisher-information limit"),
        (5, "whole-line Fourier oracle"),
        (6, "energy theory"),
        (7, "property suites"),
    ];
    let mut failed = 0;
    for (k, name) in criteria {
        if !wanted(k) {
            continue;
        }
        let t = Instant::now();
        let checks = match k {
            1 => rate(),
            2 => coverage(&batch_for(2).unwrap()),
            3 => variance(&batch_for(3).unwrap()),
            4 => fisher(),
            5 => fourier(),
            6 => energy(),
            _ => properties(),
        };
        for c in &checks {
            println!("    [{}] {} = {:.6e}", if c.ok { "ok" } else { "!!" }, c.label, c.value);
        }
        let ok = checks.iter().all(|c| c.ok);
        failed += usize::from(!ok);
        println!(
            "criterion {k} ({name}): {} [{:.1} s]",
            if ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance finished in {:.1} s, {failed} failing", start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
