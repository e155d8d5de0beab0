//! Closed-form ingredients: wave-speed profiles, the bump kernel, quadrature and
//! the asymptotic constants of the augmented MLE.

mod kernel;
mod profile;
mod quadrature;
mod theory;

pub use kernel::{bump, bump_derivative, localize, Kernel, KernelConstants, Localization};
pub use profile::WaveSpeedProfile;
pub use quadrature::QuadratureRule;
pub use theory::{asymptotic_bias, asymptotic_bias_forms, asymptotic_stddev, beta0, estimator_bias_limit, BiasForms};
