use super::{Kernel, QuadratureRule, WaveSpeedProfile};
use crate::{Error, Result};

/// `β⁽⁰⁾(x) = (θ'(x₀)·x·K(x))'' − θ'(x₀)K'(x) = θ'(x₀)·(K'(x) + xK''(x))`.
pub fn beta0(kernel: &Kernel, profile: &WaveSpeedProfile, x0: f64, x: f64) -> Result<f64> {
    let slope = profile.derivative_at(x0)?;
    Ok(slope * (kernel.derivative(1, x) + x * kernel.derivative(2, x)))
}

fn beta0_prime(kernel: &Kernel, slope: f64, x: f64) -> f64 {
    slope * (2.0 * kernel.derivative(2, x) + x * kernel.derivative(3, x))
}

/// The two integration-by-parts forms of the normalized asymptotic bias.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasForms {
    /// `⟨K', (β⁽⁰⁾)'⟩ / ‖K'‖²`
    pub via_gradient: f64,
    /// `−⟨K'', β⁽⁰⁾⟩ / ‖K'‖²`
    pub via_laplacian: f64,
    /// `‖K'‖·‖(β⁽⁰⁾)'‖ / ‖K'‖²`, the Cauchy–Schwarz scale of the pairing.
    pub scale: f64,
}

pub fn asymptotic_bias_forms(
    kernel: &Kernel,
    profile: &WaveSpeedProfile,
    x0: f64,
    rule: &QuadratureRule,
) -> Result<BiasForms> {
    let slope = profile.derivative_at(x0)?;
    let h1 = kernel.constants().h1_norm_sq;
    let gradient = rule.integrate(|x| kernel.derivative(1, x) * beta0_prime(kernel, slope, x));
    let laplacian = -rule.integrate(|x| {
        kernel.derivative(2, x) * slope * (kernel.derivative(1, x) + x * kernel.derivative(2, x))
    });
    let beta_prime_norm = rule.integrate(|x| beta0_prime(kernel, slope, x).powi(2)).sqrt();
    Ok(BiasForms {
        via_gradient: gradient / h1,
        via_laplacian: laplacian / h1,
        scale: h1.sqrt() * beta_prime_norm / h1,
    })
}

/// `⟨K', (β⁽⁰⁾)'⟩/‖K'‖²`, zero whenever `K'''²` is even.
///
/// The mean offset of `δ⁻¹(θ̂ − θ(x₀))` for the estimator is
/// [`estimator_bias_limit`]; both vanish for symmetric or antisymmetric kernels.
pub fn asymptotic_bias(
    kernel: &Kernel,
    profile: &WaveSpeedProfile,
    x0: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    Ok(asymptotic_bias_forms(kernel, profile, x0, rule)?.via_gradient)
}

/// `−⟨K, β⁽⁰⁾⟩/‖K'‖² = θ'(x₀)·⟨xK', K'⟩/‖K'‖²`, the small-δ limit of
/// `δ⁻¹·E[R_δ]/E[I_δ]`. It follows from `E[R_δ] ≈ (T²/4)⟨ΔK_δ, (−A_θ)⁻¹β_δ⟩`
/// and is what the spectral bias oracle converges to.
pub fn estimator_bias_limit(
    kernel: &Kernel,
    profile: &WaveSpeedProfile,
    x0: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    let slope = profile.derivative_at(x0)?;
    let pairing = rule.integrate(|x| x * kernel.derivative(1, x).powi(2));
    Ok(slope * pairing / kernel.constants().h1_norm_sq)
}

/// Standard deviation of the limiting law of `δ⁻¹(θ̂ − θ(x₀))`:
/// `2·√θ(x₀)·‖K‖ / (T·‖K'‖)`.
pub fn asymptotic_stddev(theta_at_x0: f64, horizon: f64, kernel: &Kernel) -> Result<f64> {
    if !(theta_at_x0 > 0.0 && theta_at_x0.is_finite()) {
        return Err(Error::invalid("theta_at_x0", format!("must be positive, got {theta_at_x0}")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::invalid("horizon", format!("must be positive, got {horizon}")));
    }
    Ok(2.0 * theta_at_x0.sqrt() * kernel.l2_norm() / (horizon * kernel.h1_norm()))
}
