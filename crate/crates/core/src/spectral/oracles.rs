//! Closed-form moments of the measurement series, evaluated modewise.
//!
//! With `u_δ^Δ(t) = ⟨u(t), a⟩` and `u(t) = ∫₀ᵗ S(t−r) dW(r)`,
//! `Cov(⟨u(t),a⟩, ⟨u(s),b⟩) = Σ_k a_k b_k/λ_k ∫₀^{t∧s} sin((t−r)ω_k) sin((s−r)ω_k) dr`
//! where `ω_k = √λ_k` and `a_k = ⟨a, e_k⟩`.

use super::calculus::significant_modes;
use super::SpectralDecomposition;
use crate::model::WaveSpeedProfile;
use crate::solver::{MeasurementProbe, TridiagonalOperator};
use crate::{Error, Result};
use std::io::Write;

/// Modes carrying less than this fraction of a functional's energy are skipped.
pub const MODE_TRUNCATION: f64 = 1e-14;

/// Default number of outer time-quadrature steps.
pub const DEFAULT_TIME_STEPS: usize = 2000;

#[derive(Debug, Clone, Copy)]
struct Mode {
    omega: f64,
    /// `a_k b_k / λ_k`
    weight: f64,
}

/// Cross-covariance of two linear functionals of the discrete wave field.
#[derive(Debug, Clone)]
pub struct ModalCovariance {
    modes: Vec<Mode>,
}

impl ModalCovariance {
    /// Functionals given as node values `a`, `b` (paired with the Δx inner product).
    pub fn new(s: &SpectralDecomposition, a: &[f64], b: &[f64]) -> Self {
        let ca = s.project(a);
        let cb = s.project(b);
        let mut keep = vec![false; s.dim()];
        for (k, _, _) in significant_modes(s, &ca, MODE_TRUNCATION) {
            keep[k] = true;
        }
        for (k, _, _) in significant_modes(s, &cb, MODE_TRUNCATION) {
            keep[k] = true;
        }
        let modes = keep
            .iter()
            .enumerate()
            .filter(|(_, &k)| k)
            .map(|(k, _)| {
                let lambda = s.eigenvalues()[k];
                Mode {
                    omega: lambda.sqrt(),
                    weight: ca[k] * cb[k] / lambda,
                }
            })
            .collect();
        Self { modes }
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// `Cov(⟨u(t),a⟩, ⟨u(s),b⟩)`.
    pub fn covariance(&self, t: f64, s: f64) -> f64 {
        let (hi, lo) = if t >= s { (t, s) } else { (s, t) };
        self.modes
            .iter()
            .map(|m| {
                let w = m.omega;
                m.weight
                    * (0.5 * lo * ((hi - lo) * w).cos()
                        - (((hi + lo) * w).sin() - ((hi - lo) * w).sin()) / (4.0 * w))
            })
            .sum()
    }

    /// `Cov(⟨u(t),a⟩, ⟨u(t),b⟩)`.
    pub fn variance(&self, t: f64) -> f64 {
        self.modes
            .iter()
            .map(|m| m.weight * (0.5 * t - (2.0 * t * m.omega).sin() / (4.0 * m.omega)))
            .sum()
    }

    /// `∫₀ᵀ variance(t) dt` by the trapezoid rule with `steps` panels.
    pub fn integrated_variance(&self, horizon: f64, steps: usize) -> f64 {
        trapezoid(horizon, steps, |t| self.variance(t))
    }

    /// `∫₀ᵀ variance(t) dt` in closed form.
    pub fn integrated_variance_exact(&self, horizon: f64) -> f64 {
        self.modes
            .iter()
            .map(|m| {
                let w = m.omega;
                m.weight
                    * (0.25 * horizon * horizon - (1.0 - (2.0 * w * horizon).cos()) / (8.0 * w * w))
            })
            .sum()
    }

    /// `2∫₀ᵀ∫₀ᵀ Cov(t,s)² ds dt`, the variance of `∫₀ᵀ⟨u,a⟩⟨u,b⟩dt` when `a = b`.
    ///
    /// Uses the factorization, for `t ≥ s`,
    /// `∫₀ˢ sin((t−r)ω)sin((s−r)ω)dr = ½s(cₜc_s + sₜs_s) − cₜs_s/(2ω)`.
    pub fn wick_variance(&self, horizon: f64, steps: usize) -> f64 {
        if horizon == 0.0 || steps == 0 {
            return 0.0;
        }
        let h = horizon / steps as f64;
        let q = steps + 1;
        let n = self.modes.len();
        // row i holds the mode tables at t_i
        let mut cos_t = vec![0.0; q * n];
        let mut sin_t = vec![0.0; q * n];
        for i in 0..q {
            let t = i as f64 * h;
            for (k, m) in self.modes.iter().enumerate() {
                let (s, c) = (t * m.omega).sin_cos();
                cos_t[i * n + k] = c;
                sin_t[i * n + k] = s;
            }
        }
        let weight: Vec<f64> = self.modes.iter().map(|m| m.weight).collect();
        let weight_over: Vec<f64> = self.modes.iter().map(|m| m.weight / (2.0 * m.omega)).collect();
        let tw = |i: usize| if i == 0 || i == steps { 0.5 } else { 1.0 };

        let mut total = 0.0;
        for i in 0..q {
            let ci = &cos_t[i * n..(i + 1) * n];
            let si = &sin_t[i * n..(i + 1) * n];
            let mut row = 0.0;
            for j in 0..=i {
                let cj = &cos_t[j * n..(j + 1) * n];
                let sj = &sin_t[j * n..(j + 1) * n];
                let mut even = 0.0;
                let mut cross = 0.0;
                for k in 0..n {
                    even += weight[k] * (ci[k] * cj[k] + si[k] * sj[k]);
                    cross += weight_over[k] * ci[k] * sj[k];
                }
                let cov = 0.5 * (j as f64 * h) * even - cross;
                let sym = if j == i { 1.0 } else { 2.0 };
                row += sym * tw(j) * cov * cov;
            }
            total += tw(i) * row;
        }
        2.0 * total * h * h
    }
}

fn trapezoid<F: Fn(f64) -> f64>(horizon: f64, steps: usize, f: F) -> f64 {
    if horizon == 0.0 || steps == 0 {
        return 0.0;
    }
    let h = horizon / steps as f64;
    let inner: f64 = (1..steps).map(|i| f(i as f64 * h)).sum();
    h * (0.5 * (f(0.0) + f(horizon)) + inner)
}

fn check_probe(s: &SpectralDecomposition, probe: &MeasurementProbe) -> Result<()> {
    if probe.cells() - 1 != s.dim() {
        return Err(Error::invalid(
            "probe",
            format!("built for {} cells, decomposition has {} nodes", probe.cells(), s.dim()),
        ));
    }
    Ok(())
}

fn laplace_function(s: &SpectralDecomposition, probe: &MeasurementProbe) -> Vec<f64> {
    probe
        .laplace_weights_full()
        .into_iter()
        .map(|w| w / s.dx())
        .collect()
}

/// Covariance structure of `u_δ^Δ` for `probe`.
pub fn measurement_covariance(
    s: &SpectralDecomposition,
    probe: &MeasurementProbe,
) -> Result<ModalCovariance> {
    check_probe(s, probe)?;
    let a = laplace_function(s, probe);
    Ok(ModalCovariance::new(s, &a, &a))
}

/// `E[δ²I_δ] = δ²∫₀ᵀ Var(u_δ^Δ(t)) dt`, outer trapezoid with `steps` panels.
pub fn fisher_expectation_oracle(
    s: &SpectralDecomposition,
    probe: &MeasurementProbe,
    horizon: f64,
    steps: usize,
) -> Result<f64> {
    let cov = measurement_covariance(s, probe)?;
    Ok(probe.delta().powi(2) * cov.integrated_variance(horizon, steps))
}

/// `E[δ²I_δ]` with the outer integral also in closed form.
pub fn fisher_expectation_exact(
    s: &SpectralDecomposition,
    probe: &MeasurementProbe,
    horizon: f64,
) -> Result<f64> {
    let cov = measurement_covariance(s, probe)?;
    Ok(probe.delta().powi(2) * cov.integrated_variance_exact(horizon))
}

/// `Var(δ²I_δ) = 2δ⁴∫₀ᵀ∫₀ᵀ Cov(u_δ^Δ(t), u_δ^Δ(s))² ds dt`.
pub fn fisher_variance_oracle(
    s: &SpectralDecomposition,
    probe: &MeasurementProbe,
    horizon: f64,
    steps: usize,
) -> Result<f64> {
    let cov = measurement_covariance(s, probe)?;
    Ok(probe.delta().powi(4) * cov.wick_variance(horizon, steps))
}

/// `δ·E[R_δ]` for the bias term `R_δ = ∫₀ᵀ u_δ^Δ ⟨u, (A_θ − θ(x₀)Δ)K_{δ,x₀}⟩ dt`
/// as realized by the discrete estimator: the drift functional is `A_θ` applied
/// to the kernel node values and `Δ` is represented by the probe's own weights.
/// `s` must be the decomposition of the operator of `profile` on the probe grid.
pub fn bias_expectation_oracle(
    s: &SpectralDecomposition,
    probe: &MeasurementProbe,
    profile: &WaveSpeedProfile,
    horizon: f64,
    steps: usize,
) -> Result<f64> {
    check_probe(s, probe)?;
    let theta0 = profile.eval(probe.x0());
    let op = TridiagonalOperator::divergence_form(|x| profile.eval(x), 0.0, 1.0, probe.cells());
    let a = laplace_function(s, probe);
    let g: Vec<f64> = probe
        .operator_on_kernel(&op)
        .into_iter()
        .zip(&a)
        .map(|(b, a)| b / s.dx() - theta0 * a)
        .collect();
    let cov = ModalCovariance::new(s, &a, &g);
    Ok(probe.delta() * cov.integrated_variance(horizon, steps))
}

/// One oracle comparison, exported as `quantity,delta,M,T,value,reference,rel_err`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub quantity: String,
    pub delta: f64,
    pub cells: usize,
    pub horizon: f64,
    pub value: f64,
    pub reference: f64,
}

impl OracleRow {
    pub fn rel_err(&self) -> f64 {
        (self.value - self.reference).abs() / self.reference.abs()
    }
}

pub const ORACLE_HEADER: &str = "quantity,delta,M,T,value,reference,rel_err";

pub fn write_oracle_csv<W: Write>(mut out: W, rows: &[OracleRow]) -> Result<()> {
    writeln!(out, "{ORACLE_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{:.12e},{:.12e},{:.6e}",
            r.quantity,
            r.delta,
            r.cells,
            r.horizon,
            r.value,
            r.reference,
            r.rel_err()
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{estimator_bias_limit, Kernel, QuadratureRule};
    use crate::solver::{assemble_operator, Grid, LaplaceWeights};
    use crate::spectral::{apply_sine, eigendecompose};

    fn setup(
        profile: &WaveSpeedProfile,
        m: usize,
        x0: f64,
        delta: f64,
    ) -> (SpectralDecomposition, MeasurementProbe) {
        let g = Grid::with_default_steps(m, 1.0).unwrap();
        let a = assemble_operator(profile, &g).unwrap();
        let s = eigendecompose(&a, g.dx()).unwrap();
        let p = MeasurementProbe::new(&Kernel::standard(), &g, x0, delta, LaplaceWeights::Stencil)
            .unwrap();
        (s, p)
    }

    #[test]
    fn covariance_kernel_against_direct_quadrature() {
        let profile = WaveSpeedProfile::quadratic_bump();
        let (s, p) = setup(&profile, 64, 0.4, 0.2);
        let a = laplace_function(&s, &p);
        let cov = ModalCovariance::new(&s, &a, &a);
        let (t, u) = (0.7, 0.45);
        // ∫₀^{u} ⟨S(t−r)a, S(u−r)a⟩ dr by Simpson
        let n = 2000;
        let h = u / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let r = i as f64 * h;
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * s.inner(&apply_sine(&s, t - r, &a), &apply_sine(&s, u - r, &a));
        }
        acc *= h / 3.0;
        let got = cov.covariance(t, u);
        assert!((got - acc).abs() <= 1e-6 * acc.abs(), "{got} vs {acc}");
        assert!((cov.covariance(u, t) - got).abs() <= 1e-12 * got.abs());
        assert!((cov.covariance(t, t) - cov.variance(t)).abs() <= 1e-10 * cov.variance(t));
    }

    #[test]
    fn trapezoid_matches_closed_form() {
        let one = WaveSpeedProfile::constant(1.0).unwrap();
        let (s, p) = setup(&one, 256, 0.5, 0.1);
        let trap = fisher_expectation_oracle(&s, &p, 1.0, DEFAULT_TIME_STEPS).unwrap();
        let exact = fisher_expectation_exact(&s, &p, 1.0).unwrap();
        assert!((trap - exact).abs() <= 1e-5 * exact);
        assert_eq!(fisher_expectation_oracle(&s, &p, 0.0, 100).unwrap(), 0.0);
        assert_eq!(fisher_variance_oracle(&s, &p, 0.0, 100).unwrap(), 0.0);
    }

    #[test]
    fn expectation_monotone_in_horizon() {
        let (s, p) = setup(&WaveSpeedProfile::quadratic_bump(), 128, 0.5, 0.2);
        let mut last = 0.0;
        for i in 1..=10 {
            let v = fisher_expectation_exact(&s, &p, i as f64 * 0.2).unwrap();
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn fisher_expectation_near_limit() {
        let one = WaveSpeedProfile::constant(1.0).unwrap();
        let (s, p) = setup(&one, 512, 0.5, 0.1);
        let limit = Kernel::standard().constants().h1_norm_sq / 4.0;
        let v = fisher_expectation_oracle(&s, &p, 1.0, DEFAULT_TIME_STEPS).unwrap();
        assert!((v - limit).abs() <= 0.1 * limit, "{v} vs {limit}");
    }

    #[test]
    fn wick_variance_matches_direct_double_sum() {
        let (s, p) = setup(&WaveSpeedProfile::quadratic_bump(), 64, 0.5, 0.25);
        let cov = measurement_covariance(&s, &p).unwrap();
        let (horizon, steps) = (0.8, 40);
        let h = horizon / steps as f64;
        let tw = |i: usize| if i == 0 || i == steps { 0.5 } else { 1.0 };
        let mut direct = 0.0;
        for i in 0..=steps {
            for j in 0..=steps {
                direct += tw(i) * tw(j) * cov.covariance(i as f64 * h, j as f64 * h).powi(2);
            }
        }
        direct *= 2.0 * h * h;
        let fast = cov.wick_variance(horizon, steps);
        assert!((fast - direct).abs() <= 1e-10 * direct);
    }

    #[test]
    fn variance_shrinks_with_delta() {
        let one = WaveSpeedProfile::constant(1.0).unwrap();
        let (s, wide) = setup(&one, 512, 0.5, 0.1);
        let g = Grid::with_default_steps(512, 1.0).unwrap();
        let narrow =
            MeasurementProbe::new(&Kernel::standard(), &g, 0.5, 0.04, LaplaceWeights::Stencil)
                .unwrap();
        let v_wide = fisher_variance_oracle(&s, &wide, 1.0, 400).unwrap();
        let v_narrow = fisher_variance_oracle(&s, &narrow, 1.0, 400).unwrap();
        assert!(v_narrow < v_wide, "{v_narrow} vs {v_wide}");
    }

    #[test]
    fn bias_vanishes_for_constant_speed() {
        let c = WaveSpeedProfile::constant(0.8).unwrap();
        let (s, p) = setup(&c, 128, 0.5, 0.2);
        let b = bias_expectation_oracle(&s, &p, &c, 1.0, 200).unwrap();
        assert!(b.abs() < 1e-12, "{b}");
    }

    #[test]
    fn asymmetric_bias_converges_to_limit() {
        let profile = WaveSpeedProfile::quadratic_bump();
        let kernel = Kernel::asymmetric();
        let (x0, m) = (0.3, 1024);
        let g = Grid::with_default_steps(m, 1.0).unwrap();
        let s = eigendecompose(&assemble_operator(&profile, &g).unwrap(), g.dx()).unwrap();
        let at = |delta: f64| {
            let p = MeasurementProbe::new(&kernel, &g, x0, delta, LaplaceWeights::Stencil).unwrap();
            bias_expectation_oracle(&s, &p, &profile, 1.0, DEFAULT_TIME_STEPS).unwrap()
        };
        let limit = estimator_bias_limit(&kernel, &profile, x0, &QuadratureRule::default())
            .unwrap()
            * kernel.constants().h1_norm_sq
            / (4.0 * profile.eval(x0));
        let (coarse, fine) = (at(0.04), at(0.02));
        // first-order convergence: the error halves with δ
        assert!((fine - limit).abs() < 0.6 * (coarse - limit).abs());
        let extrapolated = 2.0 * fine - coarse;
        assert!((extrapolated - limit).abs() <= 0.1 * limit.abs(), "{extrapolated} vs {limit}");
    }

    #[test]
    fn oracle_csv_layout() {
        let rows = vec![OracleRow {
            quantity: "fisher_expectation".into(),
            delta: 0.1,
            cells: 256,
            horizon: 1.0,
            value: 1.1,
            reference: 1.0,
        }];
        let mut buf = Vec::new();
        write_oracle_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(ORACLE_HEADER));
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), 7);
        assert!((fields[6].parse::<f64>().unwrap() - 0.1).abs() < 1e-9);
    }
}
