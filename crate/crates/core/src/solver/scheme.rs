use super::TridiagonalOperator;

/// Interior amplitudes and velocities; boundary values are implicitly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub step: usize,
}

impl SolverState {
    pub fn zero(nodes: usize) -> Self {
        Self {
            u: vec![0.0; nodes],
            v: vec![0.0; nodes],
            step: 0,
        }
    }

    /// `‖v‖²Δx + ⟨(−A)u, u⟩Δx`.
    pub fn energy(&self, operator: &TridiagonalOperator, dx: f64) -> f64 {
        let au = operator.apply(&self.u);
        let kinetic: f64 = self.v.iter().map(|v| v * v).sum();
        let potential: f64 = -self.u.iter().zip(&au).map(|(u, a)| u * a).sum::<f64>();
        (kinetic + potential) * dx
    }
}

/// Symplectic Euler for `u̇ = v`, `v̇ = Au + Ẇ`:
///
/// ```text
/// u^{k+1} = u^k + Δt·v^k
/// v^{k+1} = v^k + Δt·A u^{k+1} + σ·ξ^k,    σ = √(Δt/Δx) · noise_scale
/// ```
///
/// with `ξ^k` i.i.d. standard normal per interior node. No linear solve.
#[derive(Debug, Clone)]
pub struct SymplecticEuler {
    operator: TridiagonalOperator,
    dt: f64,
    noise_amplitude: f64,
}

impl SymplecticEuler {
    pub fn new(operator: TridiagonalOperator, dt: f64, dx: f64) -> Self {
        Self {
            operator,
            dt,
            noise_amplitude: (dt / dx).sqrt(),
        }
    }

    pub fn with_noise_scale(mut self, scale: f64) -> Self {
        self.noise_amplitude *= scale;
        self
    }

    pub fn operator(&self) -> &TridiagonalOperator {
        &self.operator
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn noise_amplitude(&self) -> f64 {
        self.noise_amplitude
    }

    /// Advances `state` by one step using the standard normals in `noise`.
    pub fn step(&self, state: &mut SolverState, noise: &[f64]) {
        let n = self.operator.dim();
        assert!(state.u.len() == n && state.v.len() == n && noise.len() == n);
        let dt = self.dt;
        let sigma = self.noise_amplitude;
        let (u, v) = (&mut state.u[..], &mut state.v[..]);
        for (uj, vj) in u.iter_mut().zip(v.iter()) {
            *uj += dt * vj;
        }
        let d = self.operator.diag();
        let o = self.operator.off_diag();
        if n == 1 {
            v[0] += dt * d[0] * u[0] + sigma * noise[0];
        } else {
            v[0] += dt * (d[0] * u[0] + o[0] * u[1]) + sigma * noise[0];
            for j in 1..n - 1 {
                v[j] += dt * (o[j - 1] * u[j - 1] + d[j] * u[j] + o[j] * u[j + 1])
                    + sigma * noise[j];
            }
            v[n - 1] += dt * (o[n - 2] * u[n - 2] + d[n - 1] * u[n - 1]) + sigma * noise[n - 1];
        }
        state.step += 1;
    }
}
