//! Numerical laboratory for the 1-D stochastic wave equation
//! `∂²ₜu = ∂ₓ(θ∂ₓu) + Ẇ` on `(0,1)` with Dirichlet boundaries.
//!
//! The crate simulates the equation with a streaming symplectic Euler scheme,
//! estimates the wave speed `θ(x₀)` from kernel-localized measurements with the
//! augmented maximum-likelihood estimator, and checks the asymptotic theory of
//! that estimator against deterministic spectral and Fourier oracles.
//!
//! Modules:
//!
//! * [`model`]: wave-speed profiles, the bump kernel and its exact derivatives,
//!   quadrature and the asymptotic bias/variance constants.
//! * [`solver`]: finite-difference operator, symplectic Euler stepping and
//!   measurement probes.
//! * [`spectral`]: eigendecomposition of the discrete operator, functional
//!   calculus and closed-form moment oracles.
//! * [`estimator`]: augmented MLE, observed Fisher information, confidence
//!   intervals and the error decomposition.
//! * [`montecarlo`]: seeded, deterministic parallel studies.

pub mod error;
pub mod estimator;
pub mod model;
pub mod montecarlo;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
