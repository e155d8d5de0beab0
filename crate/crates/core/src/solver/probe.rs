use super::{Grid, TridiagonalOperator};
use crate::model::{Kernel, Localization};
use crate::{Error, Result};

/// Tolerance when comparing a probe support with the domain boundary.
const BOUNDARY_SLACK: f64 = 1e-12;

/// How the weights of `u_δ^Δ = ⟨u, δ⁻²(ΔK)_{δ,x₀}⟩` are discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LaplaceWeights {
    /// `δ⁻²(ΔK)_{δ,x₀}(y_j)·Δx`: the exact second derivative sampled at nodes.
    Sampled,
    /// `(Δ_h K_{δ,x₀})(y_j)·Δx` with the three-point Dirichlet Laplacian, i.e.
    /// the Laplacian of the discretized model. For constant `θ` this makes
    /// `v_δ` increments exactly `θ·Δt·u_δ^Δ` plus noise.
    #[default]
    Stencil,
}

impl LaplaceWeights {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "sampled" => Ok(Self::Sampled),
            "stencil" => Ok(Self::Stencil),
            other => Err(Error::Config(format!(
                "unknown laplace_weights `{other}` (expected `sampled` or `stencil`)"
            ))),
        }
    }
}

/// Kernel-localized linear functionals on the interior grid values.
///
/// Weights are stored densely over the index window `start..start+len` that
/// covers the support; they vanish outside it.
#[derive(Debug, Clone)]
pub struct MeasurementProbe {
    localization: Localization,
    cells: usize,
    start: usize,
    kernel_weights: Vec<f64>,
    laplace_weights: Vec<f64>,
    kernel_l2_norm: f64,
    truncated: bool,
}

impl MeasurementProbe {
    /// Probe whose support `[x₀−δ, x₀+δ]` must lie inside `[0,1]`.
    pub fn new(
        kernel: &Kernel,
        grid: &Grid,
        x0: f64,
        delta: f64,
        weights: LaplaceWeights,
    ) -> Result<Self> {
        let loc = Localization::new(delta, x0)?;
        let (low, high) = loc.support();
        if low < -BOUNDARY_SLACK || high > 1.0 + BOUNDARY_SLACK {
            return Err(Error::ProbeOutsideDomain { low, high });
        }
        Ok(Self::build(kernel, grid, loc, weights, false))
    }

    /// Like [`MeasurementProbe::new`] but a support reaching past the boundary
    /// is cut at `[0,1]`, where the Dirichlet solution vanishes anyway.
    pub fn new_truncated(
        kernel: &Kernel,
        grid: &Grid,
        x0: f64,
        delta: f64,
        weights: LaplaceWeights,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&x0) {
            return Err(Error::invalid("x0", format!("must lie in [0,1], got {x0}")));
        }
        let loc = Localization::new(delta, x0)?;
        let (low, high) = loc.support();
        let truncated = low < -BOUNDARY_SLACK || high > 1.0 + BOUNDARY_SLACK;
        Ok(Self::build(kernel, grid, loc, weights, truncated))
    }

    fn build(
        kernel: &Kernel,
        grid: &Grid,
        loc: Localization,
        weights: LaplaceWeights,
        truncated: bool,
    ) -> Self {
        let m = grid.cells() as f64;
        let n = grid.interior_nodes();
        let dx = grid.dx();
        let (low, high) = loc.support();
        // interior node indices j (1-based) with y_j in the open support, widened
        // by one node for the stencil
        let j_lo = ((low * m).ceil() as i64 - 1).max(1) as usize;
        let j_hi = ((high * m).floor() as i64 + 1).clamp(1, n as i64) as usize;
        let start = j_lo - 1;
        let len = j_hi + 1 - j_lo;
        let delta = loc.delta();

        let node_kernel: Vec<f64> = (0..len)
            .map(|i| loc.apply(|z| kernel.eval(z), grid.node(start + i)))
            .collect();
        let kernel_weights: Vec<f64> = node_kernel.iter().map(|k| k * dx).collect();
        let laplace_weights = match weights {
            LaplaceWeights::Sampled => (0..len)
                .map(|i| {
                    loc.apply(|z| kernel.derivative(2, z), grid.node(start + i)) * dx
                        / (delta * delta)
                })
                .collect(),
            LaplaceWeights::Stencil => {
                // node values outside the window are zero (support or boundary)
                let at = |i: isize| -> f64 {
                    if i < 0 || i as usize >= len {
                        0.0
                    } else {
                        node_kernel[i as usize]
                    }
                };
                (0..len as isize)
                    .map(|i| (at(i + 1) - 2.0 * at(i) + at(i - 1)) / (dx * dx) * dx)
                    .collect()
            }
        };
        Self {
            localization: loc,
            cells: grid.cells(),
            start,
            kernel_weights,
            laplace_weights,
            kernel_l2_norm: kernel.l2_norm(),
            truncated,
        }
    }

    pub fn x0(&self) -> f64 {
        self.localization.x0()
    }

    pub fn delta(&self) -> f64 {
        self.localization.delta()
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn kernel_l2_norm(&self) -> f64 {
        self.kernel_l2_norm
    }

    /// Index window `start..end` into the interior value array.
    pub fn window(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.kernel_weights.len()
    }

    pub fn kernel_weights(&self) -> &[f64] {
        &self.kernel_weights
    }

    pub fn laplace_weights(&self) -> &[f64] {
        &self.laplace_weights
    }

    /// Weights expanded to all `M−1` interior nodes.
    pub fn kernel_weights_full(&self) -> Vec<f64> {
        self.expand(&self.kernel_weights)
    }

    pub fn laplace_weights_full(&self) -> Vec<f64> {
        self.expand(&self.laplace_weights)
    }

    fn expand(&self, w: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.cells - 1];
        full[self.window()].copy_from_slice(w);
        full
    }

    /// `⟨u, K_{δ,x₀}⟩` by the rectangle rule.
    #[inline]
    pub fn kernel_dot(&self, values: &[f64]) -> f64 {
        dot(&values[self.window()], &self.kernel_weights)
    }

    /// `⟨u, δ⁻²(ΔK)_{δ,x₀}⟩` by the rectangle rule.
    #[inline]
    pub fn laplace_dot(&self, values: &[f64]) -> f64 {
        dot(&values[self.window()], &self.laplace_weights)
    }

    /// `operator` applied to the kernel weight vector, over all interior nodes.
    pub fn operator_on_kernel(&self, operator: &TridiagonalOperator) -> Vec<f64> {
        operator.apply(&self.kernel_weights_full())
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
