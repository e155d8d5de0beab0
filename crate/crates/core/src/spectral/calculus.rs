//! Functional calculus of `−A` on the grid: the wave group and fractional powers.

use super::SpectralDecomposition;

/// Below this value of `t√λ` the sine multiplier is replaced by its limit `t`.
const SINE_SMALL_ARGUMENT: f64 = 1e-8;

#[inline]
fn sine_multiplier(t: f64, lambda: f64) -> f64 {
    let omega = lambda.sqrt();
    if t * omega < SINE_SMALL_ARGUMENT {
        t
    } else {
        (t * omega).sin() / omega
    }
}

/// `C(t)z = cos(t(−A)^{1/2})z`.
pub fn apply_cosine(s: &SpectralDecomposition, t: f64, z: &[f64]) -> Vec<f64> {
    s.apply_fn(z, |l| (t * l.sqrt()).cos())
}

/// `S(t)z = (−A)^{−1/2} sin(t(−A)^{1/2})z`.
pub fn apply_sine(s: &SpectralDecomposition, t: f64, z: &[f64]) -> Vec<f64> {
    s.apply_fn(z, |l| sine_multiplier(t, l))
}

/// `(−A)^{α} z`.
pub fn apply_power(s: &SpectralDecomposition, alpha: f64, z: &[f64]) -> Vec<f64> {
    s.apply_fn(z, |l| l.powf(alpha))
}

/// `‖C(t)z‖² + ‖(−A)^{1/2}S(t)z‖² − ‖z‖²`, which vanishes up to rounding.
pub fn unitarity_check(s: &SpectralDecomposition, t: f64, z: &[f64]) -> f64 {
    let c = s.project(z);
    let mut cos_part = 0.0;
    let mut sin_part = 0.0;
    let mut total = 0.0;
    for (ck, &l) in c.iter().zip(s.eigenvalues()) {
        let phase = t * l.sqrt();
        cos_part += (phase.cos() * ck).powi(2);
        sin_part += (phase.sin() * ck).powi(2);
        total += ck * ck;
    }
    cos_part + sin_part - total
}

/// `|⟨e^{iτ(−A)^{1/2}}z, z⟩|`, evaluated on whatever grid `s` describes.
pub fn riemann_lebesgue_modulus(s: &SpectralDecomposition, tau: f64, z: &[f64]) -> f64 {
    let c = s.project(z);
    let (re, im) = c
        .iter()
        .zip(s.eigenvalues())
        .fold((0.0, 0.0), |(re, im), (ck, &l)| {
            let phase = tau * l.sqrt();
            (re + phase.cos() * ck * ck, im + phase.sin() * ck * ck)
        });
    re.hypot(im)
}

/// `‖C(t)z‖²/‖z‖²`. Averaged over long times this tends to ½.
pub fn equipartition_ratio(s: &SpectralDecomposition, t: f64, z: &[f64]) -> f64 {
    let c = s.project(z);
    let mut num = 0.0;
    let mut den = 0.0;
    for (ck, &l) in c.iter().zip(s.eigenvalues()) {
        num += ((t * l.sqrt()).cos() * ck).powi(2);
        den += ck * ck;
    }
    num / den
}

/// Modal coefficients of `z` whose relative energy exceeds `threshold`, as
/// `(index, eigenvalue, coefficient)`.
pub(crate) fn significant_modes(
    s: &SpectralDecomposition,
    coefficients: &[f64],
    threshold: f64,
) -> Vec<(usize, f64, f64)> {
    let total: f64 = coefficients.iter().map(|c| c * c).sum();
    coefficients
        .iter()
        .zip(s.eigenvalues())
        .enumerate()
        .filter(|(_, (c, _))| c.powi(2) > threshold * total)
        .map(|(k, (&c, &l))| (k, l, c))
        .collect()
}
