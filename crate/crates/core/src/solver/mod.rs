//! Streaming finite-difference simulation of `∂²ₜu = ∂ₓ(θ∂ₓu) + Ẇ` on `(0,1)`
//! with homogeneous Dirichlet boundaries and zero initial data.
//!
//! Space is discretized by the conservative three-point stencil on a uniform
//! grid, time by symplectic Euler. Only kernel-localized measurements are kept
//! per step, so memory is `O(M + N·#probes)`.

mod grid;
mod io;
mod operator;
mod probe;
mod scheme;
mod simulate;

pub use grid::{Grid, CFL_LIMIT};
pub use io::{read_series_csv, write_series_csv, write_snapshot_csv};
pub use operator::{assemble_operator, TridiagonalOperator};
pub use probe::{LaplaceWeights, MeasurementProbe};
pub use scheme::{SolverState, SymplecticEuler};
pub use simulate::{
    simulate, simulate_with, MeasurementSeries, SeriesDiagnostics, SimulationOptions,
    SimulationOutput, Snapshot, SnapshotSpec,
};
