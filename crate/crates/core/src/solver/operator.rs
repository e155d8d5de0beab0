use super::Grid;
use crate::model::WaveSpeedProfile;
use crate::Result;

/// Symmetric tridiagonal matrix; here always a discretization of
/// `z ↦ (θz')'` with Dirichlet boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn from_parts(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal must have n−1 entries");
        Self { diag, off }
    }

    /// `(Az)_j = [θ_{j+½}(z_{j+1} − z_j) − θ_{j−½}(z_j − z_{j−1})]/h²` on the
    /// interior nodes `a + jh`, `j = 1..cells−1`, `h = (b − a)/cells`, with
    /// `θ_{j±½}` taken at the cell midpoints.
    pub fn divergence_form<F: Fn(f64) -> f64>(coefficient: F, a: f64, b: f64, cells: usize) -> Self {
        let h = (b - a) / cells as f64;
        let inv_h2 = 1.0 / (h * h);
        // θ at midpoints (j + ½)h for j = 0..cells−1
        let mids: Vec<f64> = (0..cells)
            .map(|j| coefficient(a + (j as f64 + 0.5) * h))
            .collect();
        let n = cells - 1;
        let diag = (0..n).map(|j| -(mids[j] + mids[j + 1]) * inv_h2).collect();
        let off = (1..n).map(|j| mids[j] * inv_h2).collect();
        Self { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diag(&self) -> &[f64] {
        &self.off
    }

    /// `out = A·z`.
    pub fn apply_into(&self, z: &[f64], out: &mut [f64]) {
        let n = self.dim();
        assert!(z.len() == n && out.len() == n);
        if n == 1 {
            out[0] = self.diag[0] * z[0];
            return;
        }
        out[0] = self.diag[0] * z[0] + self.off[0] * z[1];
        for j in 1..n - 1 {
            out[j] = self.off[j - 1] * z[j - 1] + self.diag[j] * z[j] + self.off[j] * z[j + 1];
        }
        out[n - 1] = self.off[n - 2] * z[n - 2] + self.diag[n - 1] * z[n - 1];
    }

    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.apply_into(z, &mut out);
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            diag: self.diag.iter().map(|d| d * factor).collect(),
            off: self.off.iter().map(|o| o * factor).collect(),
        }
    }

    /// Dense row-major copy, for tests and small problems.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for j in 0..n {
            m[j][j] = self.diag[j];
            if j + 1 < n {
                m[j][j + 1] = self.off[j];
                m[j + 1][j] = self.off[j];
            }
        }
        m
    }
}

/// Divergence-form operator of `profile` on the interior nodes of `grid`.
/// Fails if the grid violates the CFL bound for this profile.
pub fn assemble_operator(profile: &WaveSpeedProfile, grid: &Grid) -> Result<TridiagonalOperator> {
    grid.check_cfl(profile)?;
    Ok(TridiagonalOperator::divergence_form(
        |x| profile.eval(x),
        0.0,
        1.0,
        grid.cells(),
    ))
}
