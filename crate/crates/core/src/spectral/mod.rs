//! Deterministic references built from the eigendecomposition of the discrete
//! operator and from Fourier transforms on the whole line.

mod calculus;
mod eigen;
mod fourier;
mod oracles;

pub use calculus::{
    apply_cosine, apply_power, apply_sine, equipartition_ratio, riemann_lebesgue_modulus,
    unitarity_check,
};
pub use eigen::{eigendecompose, SpectralDecomposition};
pub use fourier::{fourier_fisher_unbounded, fractional_limit_check, FourierQuadrature, FractionalLimit};
pub use oracles::{
    bias_expectation_oracle, fisher_expectation_exact, fisher_expectation_oracle,
    fisher_variance_oracle, measurement_covariance, write_oracle_csv, ModalCovariance, OracleRow,
    DEFAULT_TIME_STEPS, MODE_TRUNCATION, ORACLE_HEADER,
};
