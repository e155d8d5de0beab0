use crate::model::WaveSpeedProfile;
use crate::{Error, Result};

/// Largest admissible Courant number `√(max θ)·Δt/Δx`.
pub const CFL_LIMIT: f64 = 0.5;

/// Uniform space-time grid: nodes `y_j = j/M` (interior `j = 1..M−1`),
/// times `t_k = kT/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    cells: usize,
    steps: usize,
    horizon: f64,
}

impl Grid {
    pub fn new(cells: usize, steps: usize, horizon: f64) -> Result<Self> {
        if cells < 2 {
            return Err(Error::invalid("cells", format!("need at least 2 cells, got {cells}")));
        }
        if steps == 0 {
            return Err(Error::invalid("steps", "need at least one time step"));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::invalid("horizon", format!("must be positive, got {horizon}")));
        }
        Ok(Self {
            cells,
            steps,
            horizon,
        })
    }

    /// `N = round(T·M²)`, i.e. `Δt = Δx²`; this is `N = M²` at `T = 1`.
    pub fn with_default_steps(cells: usize, horizon: f64) -> Result<Self> {
        let steps = (horizon * (cells * cells) as f64).round() as usize;
        Self::new(cells, steps.max(1), horizon)
    }

    /// Grid on `[0, T]` that checks the CFL bound for `profile`.
    pub fn for_profile(
        cells: usize,
        steps: usize,
        horizon: f64,
        profile: &WaveSpeedProfile,
    ) -> Result<Self> {
        let grid = Self::new(cells, steps, horizon)?;
        grid.check_cfl(profile)?;
        Ok(grid)
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn interior_nodes(&self) -> usize {
        self.cells - 1
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.cells as f64
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    /// Position of interior node `index` (0-based, i.e. `y_{index+1}`).
    pub fn node(&self, index: usize) -> f64 {
        (index + 1) as f64 / self.cells as f64
    }

    pub fn time(&self, step: usize) -> f64 {
        step as f64 * self.horizon / self.steps as f64
    }

    pub fn courant(&self, profile: &WaveSpeedProfile) -> f64 {
        profile.max_on_grid().sqrt() * self.dt() / self.dx()
    }

    pub fn check_cfl(&self, profile: &WaveSpeedProfile) -> Result<()> {
        let courant = self.courant(profile);
        if courant > CFL_LIMIT {
            return Err(Error::Cfl {
                courant,
                limit: CFL_LIMIT,
            });
        }
        Ok(())
    }

    /// Same spatial resolution and step size, with the horizon cut at `steps`.
    pub fn truncated(&self, steps: usize) -> Result<Self> {
        Self::new(self.cells, steps, self.time(steps))
    }
}
