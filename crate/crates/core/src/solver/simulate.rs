use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rand_distr::StandardNormal;

use super::probe::dot;
use super::{
    assemble_operator, Grid, MeasurementProbe, SolverState, SymplecticEuler, TridiagonalOperator,
};
use crate::model::WaveSpeedProfile;
use crate::{Error, Result};

/// Per-step quantities needed to split the estimation error exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesDiagnostics {
    /// `σ⟨ξ^k, w_K⟩`, the noise part of `v_δ[k+1] − v_δ[k]`.
    pub noise: Vec<f64>,
    /// `⟨u^{k+1}, A_θ w_K⟩`, the drift part divided by `Δt`.
    pub drift: Vec<f64>,
    /// `⟨u^{k+1}, (A_θ − θ(x₀)A_1) w_K⟩`, the part of `drift` caused by the
    /// variation of `θ`; exactly zero for constant speed.
    pub heterogeneity: Vec<f64>,
}

/// Local measurements `u_δ`, `u_δ^Δ`, `v_δ` at `t_k = kΔt`, `k = 0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSeries {
    pub x0: f64,
    pub delta: f64,
    pub dt: f64,
    pub seed: u64,
    pub kernel_l2_norm: f64,
    pub u: Vec<f64>,
    pub u_lap: Vec<f64>,
    pub v: Vec<f64>,
    pub diagnostics: Option<SeriesDiagnostics>,
}

impl MeasurementSeries {
    pub fn steps(&self) -> usize {
        self.u.len().saturating_sub(1)
    }

    pub fn horizon(&self) -> f64 {
        self.steps() as f64 * self.dt
    }

    /// The series restricted to `k = 0..=steps`.
    pub fn prefix(&self, steps: usize) -> Self {
        let steps = steps.min(self.steps());
        Self {
            u: self.u[..=steps].to_vec(),
            u_lap: self.u_lap[..=steps].to_vec(),
            v: self.v[..=steps].to_vec(),
            diagnostics: self.diagnostics.as_ref().map(|d| SeriesDiagnostics {
                noise: d.noise[..steps].to_vec(),
                drift: d.drift[..steps].to_vec(),
                heterogeneity: d.heterogeneity[..steps].to_vec(),
            }),
            ..self.clone()
        }
    }

    /// The series restricted to `k = from..=to`, re-indexed from 0.
    pub fn window(&self, from: usize, to: usize) -> Self {
        let to = to.min(self.steps());
        Self {
            u: self.u[from..=to].to_vec(),
            u_lap: self.u_lap[from..=to].to_vec(),
            v: self.v[from..=to].to_vec(),
            diagnostics: self.diagnostics.as_ref().map(|d| SeriesDiagnostics {
                noise: d.noise[from..to].to_vec(),
                drift: d.drift[from..to].to_vec(),
                heterogeneity: d.heterogeneity[from..to].to_vec(),
            }),
            ..self.clone()
        }
    }
}

/// Downsampling of the field history for heatmaps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotSpec {
    pub max_times: usize,
    pub max_nodes: usize,
}

impl Default for SnapshotSpec {
    fn default() -> Self {
        Self {
            max_times: 200,
            max_nodes: 200,
        }
    }
}

/// Strided field samples including the Dirichlet boundary nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub times: Vec<f64>,
    pub xs: Vec<f64>,
    /// Row-major by time: `u[i·xs.len() + j]`.
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOptions {
    /// Multiplies the driving noise; 1 for the model itself.
    pub noise_scale: f64,
    pub record_diagnostics: bool,
    pub snapshot: Option<SnapshotSpec>,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self {
            noise_scale: 1.0,
            record_diagnostics: false,
            snapshot: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulationOutput {
    pub series: Vec<MeasurementSeries>,
    pub snapshot: Option<Snapshot>,
}

/// One seeded run with default options.
pub fn simulate(
    profile: &WaveSpeedProfile,
    grid: &Grid,
    probes: &[MeasurementProbe],
    seed: u64,
) -> Result<Vec<MeasurementSeries>> {
    Ok(simulate_with(profile, grid, probes, seed, &SimulationOptions::default())?.series)
}

fn combine(a: &[f64], b: &[f64], factor: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - factor * y).collect()
}

fn stride(count: usize, max: usize) -> usize {
    count.div_ceil(max.max(1)).max(1)
}

struct Recorder<'a> {
    probe: &'a MeasurementProbe,
    series: MeasurementSeries,
    drift_weights: Option<(Vec<f64>, Vec<f64>)>,
}

/// Runs the scheme for `grid.steps()` steps from zero data, recording every
/// probe at every step. The noise stream is `Xoshiro256PlusPlus::seed_from_u64(seed)`,
/// drawn node by node, step by step, so a run is a pure function of its
/// inputs.
pub fn simulate_with(
    profile: &WaveSpeedProfile,
    grid: &Grid,
    probes: &[MeasurementProbe],
    seed: u64,
    options: &SimulationOptions,
) -> Result<SimulationOutput> {
    let operator = assemble_operator(profile, grid)?;
    for p in probes {
        if p.cells() != grid.cells() {
            return Err(Error::invalid(
                "probes",
                format!("probe built for M = {} used on M = {}", p.cells(), grid.cells()),
            ));
        }
    }
    let n = grid.interior_nodes();
    let steps = grid.steps();
    let unit = options
        .record_diagnostics
        .then(|| TridiagonalOperator::divergence_form(|_| 1.0, 0.0, 1.0, grid.cells()));

    let mut recorders: Vec<Recorder> = probes
        .iter()
        .map(|p| {
            let mut series = MeasurementSeries {
                x0: p.x0(),
                delta: p.delta(),
                dt: grid.dt(),
                seed,
                kernel_l2_norm: p.kernel_l2_norm(),
                u: Vec::with_capacity(steps + 1),
                u_lap: Vec::with_capacity(steps + 1),
                v: Vec::with_capacity(steps + 1),
                diagnostics: None,
            };
            series.u.push(0.0);
            series.u_lap.push(0.0);
            series.v.push(0.0);
            let drift_weights = unit.as_ref().map(|unit| {
                series.diagnostics = Some(SeriesDiagnostics {
                    noise: Vec::with_capacity(steps),
                    drift: Vec::with_capacity(steps),
                    heterogeneity: Vec::with_capacity(steps),
                });
                // entrywise difference, so constant speeds cancel without rounding
                let theta0 = profile.eval(p.x0());
                let difference = TridiagonalOperator::from_parts(
                    combine(operator.diag(), unit.diag(), theta0),
                    combine(operator.off_diag(), unit.off_diag(), theta0),
                );
                (p.operator_on_kernel(&operator), p.operator_on_kernel(&difference))
            });
            Recorder {
                probe: p,
                series,
                drift_weights,
            }
        })
        .collect();

    let scheme = SymplecticEuler::new(operator, grid.dt(), grid.dx())
        .with_noise_scale(options.noise_scale);
    let sigma = scheme.noise_amplitude();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut state = SolverState::zero(n);
    let mut noise = vec![0.0; n];

    let snap_plan = options.snapshot.map(|spec| {
        let time_stride = stride(steps + 1, spec.max_times);
        let node_stride = stride(grid.cells() + 1, spec.max_nodes);
        (time_stride, node_stride)
    });
    let mut snapshot = snap_plan.map(|(_, node_stride)| Snapshot {
        times: Vec::new(),
        xs: (0..=grid.cells())
            .step_by(node_stride)
            .map(|j| j as f64 * grid.dx())
            .collect(),
        u: Vec::new(),
        v: Vec::new(),
    });
    let take_snapshot = |snap: &mut Snapshot, st: &SolverState, node_stride: usize| {
        snap.times.push(grid.time(st.step));
        for j in (0..=grid.cells()).step_by(node_stride) {
            let (u, v) = if j == 0 || j == grid.cells() {
                (0.0, 0.0)
            } else {
                (st.u[j - 1], st.v[j - 1])
            };
            snap.u.push(u);
            snap.v.push(v);
        }
    };
    if let (Some(snap), Some((_, ns))) = (snapshot.as_mut(), snap_plan) {
        take_snapshot(snap, &state, ns);
    }

    for _ in 0..steps {
        for z in noise.iter_mut() {
            *z = rng.sample(StandardNormal);
        }
        scheme.step(&mut state, &noise);
        for rec in recorders.iter_mut() {
            let p = rec.probe;
            rec.series.u.push(p.kernel_dot(&state.u));
            rec.series.u_lap.push(p.laplace_dot(&state.u));
            rec.series.v.push(p.kernel_dot(&state.v));
            if let (Some((theta_w, hetero_w)), Some(diag)) =
                (rec.drift_weights.as_ref(), rec.series.diagnostics.as_mut())
            {
                diag.noise.push(sigma * p.kernel_dot(&noise));
                diag.drift.push(dot(&state.u, theta_w));
                diag.heterogeneity.push(dot(&state.u, hetero_w));
            }
        }
        if let (Some(snap), Some((ts, ns))) = (snapshot.as_mut(), snap_plan) {
            if state.step % ts == 0 {
                take_snapshot(snap, &state, ns);
            }
        }
    }

    Ok(SimulationOutput {
        series: recorders.into_iter().map(|r| r.series).collect(),
        snapshot,
    })
}
