use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("wave speed must be strictly positive on [0,1], found minimum {min} at x = {at}")]
    NonPositiveWaveSpeed { min: f64, at: f64 },

    #[error("CFL condition violated: sqrt(max θ)·Δt/Δx = {courant} > {limit}")]
    Cfl { courant: f64, limit: f64 },

    #[error("probe support [{low}, {high}] is not contained in the domain [0,1]")]
    ProbeOutsideDomain { low: f64, high: f64 },

    #[error("wave speed profile `{profile}` has no derivative at x₀ = {x0}")]
    NotDifferentiable { profile: String, x0: f64 },

    #[error("degenerate measurement series: observed Fisher information {fisher:e} is below the threshold")]
    DegenerateSeries { fisher: f64 },

    #[error("symmetric tridiagonal eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("run did not record noise increments; enable diagnostics in the simulation options")]
    MissingDiagnostics,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot read configuration file {path}")]
    ConfigFile {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
