//! Flat `key = value` experiment configuration.
//!
//! One key per line; `#` starts a comment; lists are comma separated. Keys:
//!
//! | key | meaning | example |
//! |---|---|---|
//! | `study` | `rate`, `normality`, `time_horizon`, `coverage`, `snapshot`, `crosscheck`, `energy` | `rate` |
//! | `theta` | `a`, `b`, `const:<c>` | `a` |
//! | `kernel` | `standard` (φ''') or `asymmetric` (φ'+φ'') | `standard` |
//! | `x0` | probe centers | `0.6` |
//! | `delta` | probe scales | `0.2, 0.1` |
//! | `T` | horizons (or times for `energy`) | `1, 2` |
//! | `M` | spatial cells | `256` |
//! | `N` | time steps up to the largest `T`; default `round(T·M²)` | `65536` |
//! | `runs` | Monte Carlo runs | `500` |
//! | `seed` | master seed | `2024` |
//! | `alpha` | interval levels `ᾱ` | `0.1, 0.05` |
//! | `laplace_weights` | `stencil` or `sampled` | `stencil` |
//! | `min_delta_cells` | lower bound on `δ·M` | `20` |
//! | `truncate_support` | allow supports reaching past the boundary | `false` |
//! | `workers` | worker threads | `4` |
//! | `output` | results directory | `results` |
//! | `keep_runs` | write per-run records | `true` |
//!
//! Unknown keys and malformed values are errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::model::{Kernel, WaveSpeedProfile};
use crate::solver::{Grid, LaplaceWeights, MeasurementProbe};
use crate::{Error, Result};

/// Spatial resolution of `--paper-scale` runs.
pub const PAPER_SCALE_CELLS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Study {
    Rate,
    Normality,
    TimeHorizon,
    Coverage,
    FieldSnapshot,
    OracleCrossCheck,
    Energy,
}

impl Study {
    pub fn name(self) -> &'static str {
        match self {
            Study::Rate => "rate",
            Study::Normality => "normality",
            Study::TimeHorizon => "time_horizon",
            Study::Coverage => "coverage",
            Study::FieldSnapshot => "snapshot",
            Study::OracleCrossCheck => "crosscheck",
            Study::Energy => "energy",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "rate" => Study::Rate,
            "normality" => Study::Normality,
            "time_horizon" => Study::TimeHorizon,
            "coverage" => Study::Coverage,
            "snapshot" => Study::FieldSnapshot,
            "crosscheck" => Study::OracleCrossCheck,
            "energy" => Study::Energy,
            other => return Err(Error::Config(format!("unknown study `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelChoice {
    Standard,
    Asymmetric,
}

impl KernelChoice {
    pub fn kernel(self) -> Kernel {
        match self {
            KernelChoice::Standard => Kernel::standard(),
            KernelChoice::Asymmetric => Kernel::asymmetric(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            KernelChoice::Standard => "standard",
            KernelChoice::Asymmetric => "asymmetric",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub study: Study,
    pub profile: WaveSpeedProfile,
    pub kernel: KernelChoice,
    pub x0: Vec<f64>,
    pub deltas: Vec<f64>,
    pub horizons: Vec<f64>,
    pub cells: usize,
    pub steps: Option<usize>,
    pub runs: usize,
    pub master_seed: u64,
    pub alphas: Vec<f64>,
    pub laplace_weights: LaplaceWeights,
    pub min_delta_cells: f64,
    pub truncate_support: bool,
    pub workers: usize,
    pub output: PathBuf,
    pub keep_runs: bool,
}

const KEYS: &[&str] = &[
    "study",
    "theta",
    "kernel",
    "x0",
    "delta",
    "T",
    "M",
    "N",
    "runs",
    "seed",
    "alpha",
    "laplace_weights",
    "min_delta_cells",
    "truncate_support",
    "workers",
    "output",
    "keep_runs",
];

impl ExperimentConfig {
    /// Desk-scale defaults of each study.
    pub fn defaults(study: Study) -> Self {
        let base = Self {
            study,
            profile: WaveSpeedProfile::quadratic_bump(),
            kernel: KernelChoice::Standard,
            x0: vec![0.6],
            deltas: vec![0.1],
            horizons: vec![1.0],
            cells: 256,
            steps: None,
            runs: 500,
            master_seed: 2024,
            alphas: vec![0.1, 0.05],
            laplace_weights: LaplaceWeights::Stencil,
            min_delta_cells: 20.0,
            truncate_support: false,
            workers: 1,
            output: PathBuf::from("results"),
            keep_runs: true,
        };
        match study {
            Study::Rate => Self {
                deltas: vec![0.5, 0.35, 0.25, 0.18, 0.12, 0.08],
                runs: 200,
                truncate_support: true,
                ..base
            },
            Study::Normality | Study::TimeHorizon => Self {
                deltas: vec![0.08],
                horizons: vec![1.0, 2.0],
                ..base
            },
            Study::Coverage => Self {
                deltas: vec![0.2, 0.1, 0.09],
                ..base
            },
            Study::FieldSnapshot => Self { runs: 1, ..base },
            Study::OracleCrossCheck => Self {
                profile: WaveSpeedProfile::constant(1.0).expect("positive"),
                x0: vec![0.5],
                runs: 2000,
                ..base
            },
            Study::Energy => Self {
                profile: WaveSpeedProfile::constant(1.0).expect("positive"),
                x0: vec![0.5],
                deltas: vec![0.1, 0.05, 0.02, 0.01],
                horizons: vec![0.0, 0.1, 0.2, 0.3, 0.4],
                cells: 2048,
                runs: 1,
                ..base
            },
        }
    }

    /// Parses `text`; `study` comes from the text or else from `fallback`,
    /// and the two must agree when both are given.
    pub fn parse(text: &str, fallback: Option<Study>) -> Result<Self> {
        Self::parse_inner(text, fallback, true)
    }

    /// Like [`ExperimentConfig::parse`] but a `study` key in the text wins over
    /// `default` instead of conflicting with it.
    pub fn parse_with_default(text: &str, default: Study) -> Result<Self> {
        Self::parse_inner(text, Some(default), false)
    }

    fn parse_inner(text: &str, fallback: Option<Study>, strict: bool) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (number, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`, got `{line}`", number + 1))
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::Config(format!("line {}: unknown key `{key}`", number + 1)));
            }
            if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{key}`", number + 1)));
            }
        }
        let study = match entries.get("study") {
            Some(s) => Study::parse(s)?,
            None => fallback.ok_or_else(|| Error::Config("missing key `study`".into()))?,
        };
        if let (true, Some(f), Some(s)) = (strict, fallback, entries.get("study")) {
            if Study::parse(s)? != f {
                return Err(Error::Config(format!(
                    "config is for study `{s}` but `{}` was requested",
                    f.name()
                )));
            }
        }
        let mut cfg = Self::defaults(study);
        for (key, value) in &entries {
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path, fallback: Option<Study>) -> Result<Self> {
        Self::parse(&read_config(path)?, fallback)
    }

    pub fn from_file_with_default(path: &Path, default: Study) -> Result<Self> {
        Self::parse_with_default(&read_config(path)?, default)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "study" => {}
            "theta" => self.profile = WaveSpeedProfile::parse(value)?,
            "kernel" => {
                self.kernel = match value {
                    "standard" => KernelChoice::Standard,
                    "asymmetric" => KernelChoice::Asymmetric,
                    other => return Err(Error::Config(format!("unknown kernel `{other}`"))),
                }
            }
            "x0" => self.x0 = parse_list(key, value)?,
            "delta" => self.deltas = parse_list(key, value)?,
            "T" => self.horizons = parse_list(key, value)?,
            "M" => self.cells = parse_one(key, value)?,
            "N" => self.steps = Some(parse_one(key, value)?),
            "runs" => self.runs = parse_one(key, value)?,
            "seed" => self.master_seed = parse_one(key, value)?,
            "alpha" => self.alphas = parse_list(key, value)?,
            "laplace_weights" => self.laplace_weights = LaplaceWeights::parse(value)?,
            "min_delta_cells" => self.min_delta_cells = parse_one(key, value)?,
            "truncate_support" => self.truncate_support = parse_one(key, value)?,
            "workers" => self.workers = parse_one(key, value)?,
            "output" => self.output = PathBuf::from(value),
            "keep_runs" => self.keep_runs = parse_one(key, value)?,
            _ => unreachable!("keys are checked against KEYS"),
        }
        Ok(())
    }

    /// The configuration as parseable text.
    pub fn to_text(&self) -> String {
        let list = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let mut out = String::new();
        let mut put = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        put("study", self.study.name().into());
        put("theta", self.profile.name());
        put("kernel", self.kernel.name().into());
        put("x0", list(&self.x0));
        put("delta", list(&self.deltas));
        put("T", list(&self.horizons));
        put("M", self.cells.to_string());
        if let Some(n) = self.steps {
            put("N", n.to_string());
        }
        put("runs", self.runs.to_string());
        put("seed", self.master_seed.to_string());
        put("alpha", list(&self.alphas));
        let weights = match self.laplace_weights {
            LaplaceWeights::Stencil => "stencil",
            LaplaceWeights::Sampled => "sampled",
        };
        put("laplace_weights", weights.into());
        put("min_delta_cells", self.min_delta_cells.to_string());
        put("truncate_support", self.truncate_support.to_string());
        put("workers", self.workers.to_string());
        put("output", self.output.display().to_string());
        put("keep_runs", self.keep_runs.to_string());
        out
    }

    /// `M = 10³` and `N = T·M²`; nothing else changes.
    pub fn with_paper_scale(mut self) -> Self {
        self.cells = PAPER_SCALE_CELLS;
        self.steps = None;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::Config(reason));
        if self.cells < 4 {
            return bad(format!("M = {} is too small", self.cells));
        }
        if self.runs == 0 {
            return bad("runs must be at least 1".into());
        }
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        if self.x0.is_empty() || self.deltas.is_empty() || self.horizons.is_empty() {
            return bad("x0, delta and T need at least one value".into());
        }
        for &x in &self.x0 {
            if !(x > 0.0 && x < 1.0) {
                return bad(format!("x0 = {x} is outside (0,1)"));
            }
        }
        for &a in &self.alphas {
            if !(a > 0.0 && a < 1.0) {
                return bad(format!("alpha = {a} is outside (0,1)"));
            }
        }
        let zero_time_ok = self.study == Study::Energy;
        for &t in &self.horizons {
            if !(t > 0.0 || (zero_time_ok && t == 0.0)) || !t.is_finite() {
                return bad(format!("T = {t} must be positive"));
            }
        }
        for &d in &self.deltas {
            if !(d > 0.0) {
                return bad(format!("delta = {d} must be positive"));
            }
            if d * (self.cells as f64) < self.min_delta_cells {
                return bad(format!(
                    "delta = {d} with M = {} puts {:.1} cells across half the kernel support, below min_delta_cells = {}",
                    self.cells,
                    d * self.cells as f64,
                    self.min_delta_cells
                ));
            }
            if !self.truncate_support {
                for &x in &self.x0 {
                    if x - d < 0.0 || x + d > 1.0 {
                        return bad(format!(
                            "support [{}, {}] of delta = {d} at x0 = {x} leaves (0,1); set truncate_support = true to cut it",
                            x - d,
                            x + d
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn max_horizon(&self) -> f64 {
        self.horizons.iter().cloned().fold(0.0, f64::max)
    }

    /// Grid up to the largest horizon; `N` defaults to `round(T·M²)`.
    pub fn grid(&self) -> Result<Grid> {
        let horizon = self.max_horizon();
        let grid = match self.steps {
            Some(n) => Grid::new(self.cells, n, horizon)?,
            None => Grid::with_default_steps(self.cells, horizon)?,
        };
        grid.check_cfl(&self.profile)?;
        Ok(grid)
    }

    /// Number of steps that reaches `horizon` on `grid`.
    pub fn steps_for(&self, grid: &Grid, horizon: f64) -> Result<usize> {
        let exact = horizon / grid.dt();
        let steps = exact.round();
        if (exact - steps).abs() > 1e-6 {
            return Err(Error::Config(format!(
                "T = {horizon} is not a whole number of steps of Δt = {}",
                grid.dt()
            )));
        }
        Ok(steps as usize)
    }

    /// Probes in `x0`-major, `delta`-minor order.
    pub fn probes(&self, grid: &Grid) -> Result<Vec<MeasurementProbe>> {
        let kernel = self.kernel.kernel();
        let mut out = Vec::with_capacity(self.x0.len() * self.deltas.len());
        for &x in &self.x0 {
            for &d in &self.deltas {
                out.push(if self.truncate_support {
                    MeasurementProbe::new_truncated(&kernel, grid, x, d, self.laplace_weights)?
                } else {
                    MeasurementProbe::new(&kernel, grid, x, d, self.laplace_weights)?
                });
            }
        }
        Ok(out)
    }

    pub fn study_dir(&self) -> PathBuf {
        self.output.join(self.study.name())
    }
}

fn read_config(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::ConfigFile {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_one<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse `{value}` for key `{key}`")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|v| parse_one(key, v))
        .collect::<Result<Vec<f64>>>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let text = "study = coverage\n# comment\ntheta = b\nx0 = 0.25, 0.75\ndelta = 0.2,0.16\nT = 1\nM = 128\nruns = 10 # inline\nseed = 9\nalpha = 0.1\nlaplace_weights = sampled\nworkers = 2\noutput = out\n";
        let cfg = ExperimentConfig::parse(text, None).unwrap();
        assert_eq!(cfg.study, Study::Coverage);
        assert_eq!(cfg.profile.name(), "b");
        assert_eq!(cfg.x0, vec![0.25, 0.75]);
        assert_eq!(cfg.deltas, vec![0.2, 0.16]);
        assert_eq!(cfg.cells, 128);
        assert_eq!(cfg.runs, 10);
        assert_eq!(cfg.master_seed, 9);
        assert_eq!(cfg.laplace_weights, LaplaceWeights::Sampled);
        let again = ExperimentConfig::parse(&cfg.to_text(), None).unwrap();
        assert_eq!(again.to_text(), cfg.to_text());
    }

    #[test]
    fn unknown_keys_and_bad_values_are_errors() {
        assert!(ExperimentConfig::parse("study = rate\nrunz = 3\n", None).is_err());
        assert!(ExperimentConfig::parse("study = rate\nruns = many\n", None).is_err());
        assert!(ExperimentConfig::parse("runs = 3\n", None).is_err());
        assert!(ExperimentConfig::parse("study = rate\nruns = 3\nruns = 4\n", None).is_err());
        assert!(ExperimentConfig::parse("study = rate\n", Some(Study::Coverage)).is_err());
        let lenient = ExperimentConfig::parse_with_default("study = rate\n", Study::Coverage).unwrap();
        assert_eq!(lenient.study, Study::Rate);
        assert!(ExperimentConfig::parse("no equals sign\n", Some(Study::Rate)).is_err());
    }

    #[test]
    fn resolution_and_support_checks() {
        // δ·M below the threshold
        assert!(ExperimentConfig::parse("delta = 0.05\nM = 256\n", Some(Study::Coverage)).is_err());
        // support leaves the domain unless truncation is allowed
        assert!(ExperimentConfig::parse("delta = 0.5\nx0 = 0.6\n", Some(Study::Coverage)).is_err());
        assert!(ExperimentConfig::parse(
            "delta = 0.5\nx0 = 0.6\ntruncate_support = true\n",
            Some(Study::Coverage)
        )
        .is_ok());
        assert!(ExperimentConfig::defaults(Study::Rate).validate().is_ok());
    }

    #[test]
    fn missing_file_names_the_path() {
        let err = ExperimentConfig::from_file(Path::new("/nonexistent/exp.cfg"), None).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/exp.cfg"), "{err}");
    }

    #[test]
    fn default_steps_and_prefixes() {
        let cfg = ExperimentConfig::defaults(Study::Normality);
        let g = cfg.grid().unwrap();
        assert_eq!(g.steps(), 2 * 256 * 256);
        assert_eq!(cfg.steps_for(&g, 1.0).unwrap(), 256 * 256);
        let fine = cfg.with_paper_scale();
        assert_eq!(fine.cells, 1000);
        assert_eq!(fine.grid().unwrap().steps(), 2_000_000);
    }
}
