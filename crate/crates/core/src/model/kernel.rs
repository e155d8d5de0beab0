use std::sync::OnceLock;

use super::QuadratureRule;
use crate::{Error, Result};

/// Highest derivative order of the bump that can be evaluated.
pub const MAX_BUMP_ORDER: usize = 12;

/// Below this value of `1 − x²` the bump underflows and is returned as 0.
const UNDERFLOW_GAP: f64 = 1e-12;

/// Numerators `Pₙ` of `φ⁽ⁿ⁾ = Pₙ(x)/(1−x²)^{2n} · φ(x)`, coefficients in
/// increasing degree.
///
/// From `R₁ = −24x/(1−x²)²` and `R_{n+1} = Rₙ' + Rₙ·R₁`:
/// `P_{n+1} = Pₙ'(1−x²)² + 4n·x(1−x²)Pₙ − 24x·Pₙ`.
fn numerators() -> &'static [Vec<f64>] {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = vec![vec![1.0]];
        for n in 0..MAX_BUMP_ORDER {
            let p = &table[n];
            let dp: Vec<f64> = p
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect();
            let s2 = [1.0, 0.0, -2.0, 0.0, 1.0];
            let xs = [0.0, 1.0, 0.0, -1.0];
            let mut next = vec![0.0; p.len() + 3];
            for (i, a) in dp.iter().enumerate() {
                for (j, b) in s2.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            for (i, a) in p.iter().enumerate() {
                for (j, b) in xs.iter().enumerate() {
                    next[i + j] += 4.0 * n as f64 * a * b;
                }
                next[i + 1] -= 24.0 * a;
            }
            while next.len() > 1 && next.last() == Some(&0.0) {
                next.pop();
            }
            table.push(next);
        }
        table
    })
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// The bump `φ(x) = exp(−12/(1−x²))` on `(−1,1)`, zero elsewhere.
pub fn bump(x: f64) -> f64 {
    bump_derivative(0, x)
}

/// `φ⁽ⁿ⁾(x)` from the exact rational recurrence; zero for `|x| ≥ 1` and
/// wherever `φ` underflows.
///
/// # Panics
///
/// If `n` exceeds [`MAX_BUMP_ORDER`].
pub fn bump_derivative(n: usize, x: f64) -> f64 {
    assert!(n <= MAX_BUMP_ORDER, "bump derivative order {n} not tabulated");
    let gap = 1.0 - x * x;
    if !(gap > UNDERFLOW_GAP) {
        return 0.0;
    }
    // Pₙ·exp(−12/s − 2n·ln s) avoids overflowing s^{−2n} before the exponential wins.
    let log_scale = -12.0 / gap - 2.0 * n as f64 * gap.ln();
    horner(&numerators()[n], x) * log_scale.exp()
}

/// Shift-and-scale map `z ↦ δ^{−1/2} z((· − x₀)/δ)`, which preserves the L² norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Localization {
    delta: f64,
    x0: f64,
}

impl Localization {
    pub fn new(delta: f64, x0: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::invalid("delta", format!("must be positive, got {delta}")));
        }
        if !x0.is_finite() {
            return Err(Error::invalid("x0", "must be finite"));
        }
        Ok(Self { delta, x0 })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Local coordinate `(x − x₀)/δ`.
    pub fn local(&self, x: f64) -> f64 {
        (x - self.x0) / self.delta
    }

    pub fn apply<F: Fn(f64) -> f64>(&self, f: F, x: f64) -> f64 {
        f(self.local(x)) / self.delta.sqrt()
    }

    /// Support of a localized function whose reference support is `[−1,1]`.
    pub fn support(&self) -> (f64, f64) {
        (self.x0 - self.delta, self.x0 + self.delta)
    }
}

/// `δ^{−1/2} K((x − x₀)/δ)`.
pub fn localize<F: Fn(f64) -> f64>(kernel: F, delta: f64, x0: f64, x: f64) -> Result<f64> {
    Ok(Localization::new(delta, x0)?.apply(kernel, x))
}

/// Cached squared norms of a kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConstants {
    /// `‖K‖²`
    pub l2_norm_sq: f64,
    /// `‖K'‖²`
    pub h1_norm_sq: f64,
    /// `‖K''‖²`
    pub laplace_l2_norm_sq: f64,
}

/// Test function `K = Σ cᵢ φ^{(nᵢ)}` supported on `[−1,1]`.
///
/// The production kernel is `φ'''`; the general form exists for the
/// asymmetric kernel `φ' + φ''` used to exercise nonzero bias.
#[derive(Debug, Clone)]
pub struct Kernel {
    terms: Vec<(usize, f64)>,
    constants: KernelConstants,
}

impl Kernel {
    /// `K = φ⁽ⁿ⁾`.
    pub fn bump_derivative(order: usize) -> Result<Self> {
        Self::combination(&[(order, 1.0)])
    }

    /// The kernel `φ'''` used throughout the numerical study.
    pub fn standard() -> Self {
        Self::bump_derivative(3).expect("order 3 is tabulated")
    }

    /// `φ' + φ''`: no parity, zero mean, nonzero asymptotic bias.
    pub fn asymmetric() -> Self {
        Self::combination(&[(1, 1.0), (2, 1.0)]).expect("orders are tabulated")
    }

    pub fn combination(terms: &[(usize, f64)]) -> Result<Self> {
        Self::with_quadrature(terms, &QuadratureRule::default())
    }

    pub fn with_quadrature(terms: &[(usize, f64)], rule: &QuadratureRule) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("terms", "kernel needs at least one term"));
        }
        // K^{(5)} must stay within the tabulated orders.
        if let Some(&(n, _)) = terms.iter().find(|(n, _)| n + 5 > MAX_BUMP_ORDER) {
            return Err(Error::invalid(
                "order",
                format!("order {n} exceeds the supported maximum {}", MAX_BUMP_ORDER - 5),
            ));
        }
        let mut kernel = Self {
            terms: terms.to_vec(),
            constants: KernelConstants {
                l2_norm_sq: 0.0,
                h1_norm_sq: 0.0,
                laplace_l2_norm_sq: 0.0,
            },
        };
        kernel.constants = kernel.compute_constants(rule);
        Ok(kernel)
    }

    pub fn terms(&self) -> &[(usize, f64)] {
        &self.terms
    }

    /// `K⁽ᵐ⁾(x)`.
    pub fn derivative(&self, m: usize, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(n, c)| c * bump_derivative(n + m, x))
            .sum()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.derivative(0, x)
    }

    /// `∫K², ∫K'², ∫K''²` with the given rule.
    pub fn compute_constants(&self, rule: &QuadratureRule) -> KernelConstants {
        KernelConstants {
            l2_norm_sq: rule.integrate(|x| self.derivative(0, x).powi(2)),
            h1_norm_sq: rule.integrate(|x| self.derivative(1, x).powi(2)),
            laplace_l2_norm_sq: rule.integrate(|x| self.derivative(2, x).powi(2)),
        }
    }

    pub fn constants(&self) -> KernelConstants {
        self.constants
    }

    pub fn l2_norm(&self) -> f64 {
        self.constants.l2_norm_sq.sqrt()
    }

    pub fn h1_norm(&self) -> f64 {
        self.constants.h1_norm_sq.sqrt()
    }

    /// `+1` for even, `−1` for odd kernels, `None` when the terms mix parities.
    pub fn parity(&self) -> Option<i8> {
        let sign = |n: usize| if n % 2 == 0 { 1 } else { -1 };
        let first = sign(self.terms[0].0);
        self.terms
            .iter()
            .all(|&(n, _)| sign(n) == first)
            .then_some(first)
    }
}
