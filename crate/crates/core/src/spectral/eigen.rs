use crate::solver::TridiagonalOperator;
use crate::{Error, Result};

/// Iteration budget per eigenvalue for the implicit QL sweep.
const MAX_QL_ITERATIONS: usize = 60;

/// Eigenpairs of `−A` for a symmetric tridiagonal, negative definite `A`.
///
/// Eigenvalues are ascending; eigenvectors are orthonormal with respect to
/// `⟨a, b⟩ = Σ aⱼbⱼΔx` and signed so that their first non-negligible entry is
/// positive.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    /// Column-major: eigenvector `k` is `vectors[k·n .. (k+1)·n]`.
    vectors: Vec<f64>,
    dx: f64,
}

/// Full eigendecomposition of `−operator` by implicit-shift QL.
pub fn eigendecompose(operator: &TridiagonalOperator, dx: f64) -> Result<SpectralDecomposition> {
    let n = operator.dim();
    let mut d: Vec<f64> = operator.diag().iter().map(|x| -x).collect();
    let mut e: Vec<f64> = operator.off_diag().iter().map(|x| -x).collect();
    e.push(0.0);
    let mut z = vec![0.0; n * n];
    for k in 0..n {
        z[k * n + k] = 1.0;
    }
    tql2(&mut d, &mut e, &mut z, n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let scale = 1.0 / dx.sqrt();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        let col = &z[k * n..(k + 1) * n];
        let peak = col.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let first = col
            .iter()
            .find(|x| x.abs() > 1e-8 * peak)
            .copied()
            .unwrap_or(1.0);
        let sign = if first < 0.0 { -scale } else { scale };
        vectors.extend(col.iter().map(|x| x * sign));
    }
    Ok(SpectralDecomposition {
        eigenvalues: order.iter().map(|&k| d[k]).collect(),
        vectors,
        dx,
    })
}

/// Symmetric tridiagonal QL with implicit shifts (EISPACK `tql2` lineage).
/// `d` holds the diagonal, `e[0..n−1]` the off-diagonal and `e[n−1] = 0`.
/// Rotations are accumulated into the column-major `z`.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize) -> Result<()> {
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iterations = 0;
            loop {
                iterations += 1;
                if iterations > MAX_QL_ITERATIONS {
                    return Err(Error::NoConvergence {
                        index: l,
                        iterations: MAX_QL_ITERATIONS,
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (left, right) = z.split_at_mut((i + 1) * n);
                    let zi = &mut left[i * n..];
                    let zi1 = &mut right[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let h = *b;
                        *b = s * *a + c * h;
                        *a = c * *a - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> &[f64] {
        let n = self.dim();
        &self.vectors[k * n..(k + 1) * n]
    }

    /// Decomposition of `factor·(−A)`; exact for constant speeds.
    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor > 0.0, "scale factor must be positive");
        Self {
            eigenvalues: self.eigenvalues.iter().map(|l| l * factor).collect(),
            vectors: self.vectors.clone(),
            dx: self.dx,
        }
    }

    /// `⟨a, b⟩ = Σ aⱼbⱼΔx`.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * self.dx
    }

    pub fn norm_sq(&self, a: &[f64]) -> f64 {
        self.inner(a, a)
    }

    /// Coefficients `⟨z, e_k⟩`.
    pub fn project(&self, z: &[f64]) -> Vec<f64> {
        assert_eq!(z.len(), self.dim());
        (0..self.dim())
            .map(|k| self.inner(z, self.eigenvector(k)))
            .collect()
    }

    /// `Σ_k c_k e_k`.
    pub fn synthesize(&self, coefficients: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for (k, &c) in coefficients.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.eigenvector(k)) {
                *o += c * v;
            }
        }
        out
    }

    /// `f(−A) z = Σ_k f(λ_k)⟨z, e_k⟩e_k`.
    pub fn apply_fn<F: Fn(f64) -> f64>(&self, z: &[f64], f: F) -> Vec<f64> {
        let coefficients: Vec<f64> = self
            .project(z)
            .into_iter()
            .zip(&self.eigenvalues)
            .map(|(c, &l)| f(l) * c)
            .collect();
        self.synthesize(&coefficients)
    }
}
