//! Whole-line references computed with the discrete Fourier transform.

use super::SpectralDecomposition;
use crate::model::{Kernel, Localization};
use crate::{Error, Result};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Sampling of the reference kernel on `[−1, 1]` for frequency integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourierQuadrature {
    /// Samples of the kernel across `[−1, 1]`.
    pub kernel_samples: usize,
    /// Transform length after zero padding; sets the frequency spacing.
    pub padded_len: usize,
}

impl Default for FourierQuadrature {
    fn default() -> Self {
        Self {
            kernel_samples: 512,
            padded_len: 1 << 16,
        }
    }
}

/// `|F(K')(ξ_m)|²` on the transform frequencies, with the spacing `Δξ`.
fn derivative_power_spectrum(kernel: &Kernel, quad: FourierQuadrature) -> Result<(Vec<(f64, f64)>, f64)> {
    let FourierQuadrature {
        kernel_samples,
        padded_len,
    } = quad;
    if kernel_samples < 8 || padded_len < kernel_samples {
        return Err(Error::invalid(
            "fourier quadrature",
            format!("need 8 ≤ samples ≤ padded length, got {kernel_samples} and {padded_len}"),
        ));
    }
    let h = 2.0 / kernel_samples as f64;
    let mut buf = vec![Complex::new(0.0, 0.0); padded_len];
    for (i, b) in buf.iter_mut().take(kernel_samples).enumerate() {
        b.re = kernel.derivative(1, -1.0 + i as f64 * h) * h;
    }
    FftPlanner::new().plan_fft_forward(padded_len).process(&mut buf);
    let dxi = 2.0 * PI / (padded_len as f64 * h);
    let spectrum = buf
        .iter()
        .enumerate()
        .map(|(m, z)| {
            let k = if m < padded_len / 2 {
                m as f64
            } else {
                m as f64 - padded_len as f64
            };
            (k * dxi, z.norm_sqr())
        })
        .collect();
    Ok((spectrum, dxi))
}

/// `δ²E[∫₀ᵀ⟨u(t), Δ(K_{δ,x₀})⟩²dt]` for the wave equation with constant speed
/// `θ₀` on the whole line:
/// `(2πθ₀)⁻¹∫[T²/4 − (1 − cos 2cT)/(8c²)]·|F(K')(ξ)|² dξ` with `c = √θ₀|ξ|/δ`.
pub fn fourier_fisher_unbounded(
    theta0: f64,
    delta: f64,
    horizon: f64,
    kernel: &Kernel,
    quad: FourierQuadrature,
) -> Result<f64> {
    if !(theta0 > 0.0) {
        return Err(Error::invalid("theta0", format!("must be positive, got {theta0}")));
    }
    if !(delta > 0.0) || !(horizon >= 0.0) {
        return Err(Error::invalid(
            "delta/T",
            format!("need δ > 0 and T ≥ 0, got {delta} and {horizon}"),
        ));
    }
    let (spectrum, dxi) = derivative_power_spectrum(kernel, quad)?;
    let t2 = horizon * horizon;
    let sum: f64 = spectrum
        .iter()
        .map(|&(xi, power)| {
            let c = theta0.sqrt() * xi.abs() / delta;
            if c == 0.0 {
                return 0.0;
            }
            (0.25 * t2 - (1.0 - (2.0 * c * horizon).cos()) / (8.0 * c * c)) * power
        })
        .sum();
    Ok(sum * dxi / (2.0 * PI * theta0))
}

/// Comparison of `(−A_h)^{−1/2}(ΔK)_{δ,x₀}` with its whole-line limit
/// `θ₀^{−1/2}(−Δ)^{−1/2}(ΔK)_{δ,x₀}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalLimit {
    /// `‖(−A_h)^{−1/2}(ΔK)_{δ,x₀}‖`
    pub discrete_norm: f64,
    /// Norm of the whole-line term over `[0, 1]`.
    pub continuum_norm: f64,
    /// Norm of the difference relative to `continuum_norm`.
    pub rel_err: f64,
}

/// `s` must decompose a constant-speed operator with speed `theta0`.
pub fn fractional_limit_check(
    s: &SpectralDecomposition,
    theta0: f64,
    kernel: &Kernel,
    delta: f64,
    x0: f64,
) -> Result<FractionalLimit> {
    let loc = Localization::new(delta, x0)?;
    let (low, high) = loc.support();
    if low < 0.0 || high > 1.0 {
        return Err(Error::ProbeOutsideDomain { low, high });
    }
    let n = s.dim();
    let dx = s.dx();
    let cells = n + 1;
    let z: Vec<f64> = (1..cells)
        .map(|j| loc.apply(|y| kernel.derivative(2, y), j as f64 * dx))
        .collect();
    let discrete = super::apply_power(s, -0.5, &z);

    // periodic grid with the same spacing, padded well beyond the unit interval
    let len = (8 * cells).next_power_of_two();
    let offset = (len - cells) / 2;
    let mut buf: Vec<Complex<f64>> = (0..len)
        .map(|i| {
            let x = (i as f64 - offset as f64) * dx;
            Complex::new(loc.apply(|y| kernel.eval(y), x), 0.0)
        })
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut buf);
    let dxi = 2.0 * PI / (len as f64 * dx);
    // symbol of θ₀^{−1/2}(−Δ)^{−1/2}·δ²Δ is −δ²|ξ|/√θ₀
    let factor = -delta * delta / theta0.sqrt() / len as f64;
    for (m, b) in buf.iter_mut().enumerate() {
        let k = if m <= len / 2 { m as f64 } else { len as f64 - m as f64 };
        *b *= factor * k * dxi;
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    let continuum: Vec<f64> = (1..cells).map(|j| buf[offset + j].re).collect();

    let diff: Vec<f64> = discrete.iter().zip(&continuum).map(|(a, b)| a - b).collect();
    let continuum_norm = s.norm_sq(&continuum).sqrt();
    Ok(FractionalLimit {
        discrete_norm: s.norm_sq(&discrete).sqrt(),
        continuum_norm,
        rel_err: s.norm_sq(&diff).sqrt() / continuum_norm,
    })
}
