use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::config::Study;
use super::stats::histogram;
use super::studies::ExperimentResult;
use crate::solver::write_snapshot_csv;
use crate::Result;

/// Bins of the normality histograms, over `±HISTOGRAM_SPAN` limit stddevs.
const HISTOGRAM_BINS: usize = 30;
const HISTOGRAM_SPAN: f64 = 4.0;

fn e(x: f64) -> String {
    format!("{x:.12e}")
}

impl ExperimentResult {
    /// `summary.csv`: one row per `(x₀, δ, T)`.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from(
            "x0,delta,T,runs,theta_true,mean,stddev,rmse,rmse_se,asymptotic_stddev,std_ratio,scaled_mean",
        );
        for a in &self.config.alphas {
            write!(out, ",coverage_{a}").unwrap();
        }
        out.push_str(",invalid_ci\n");
        for g in &self.summaries {
            write!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                g.x0,
                g.delta,
                g.horizon,
                g.runs,
                e(g.theta_true),
                e(g.mean),
                e(g.stddev),
                e(g.rmse),
                e(g.rmse_se),
                e(g.asymptotic_stddev),
                e(g.std_ratio),
                e(g.scaled_mean)
            )
            .unwrap();
            for c in &g.coverage {
                write!(out, ",{c}").unwrap();
            }
            writeln!(out, ",{}", g.invalid_ci).unwrap();
        }
        out
    }

    /// `runs.csv`: one row per run and `(x₀, δ, T)`.
    pub fn runs_csv(&self) -> String {
        let mut out = String::from("run,seed,x0,delta,T,theta_true,theta_hat,fisher,ci_valid");
        for a in &self.config.alphas {
            write!(out, ",ci_low_{a},ci_high_{a}").unwrap();
        }
        out.push('\n');
        for r in &self.records {
            write!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.run,
                r.seed,
                r.x0,
                r.delta,
                r.horizon,
                e(r.theta_true),
                e(r.theta_hat),
                e(r.fisher),
                r.intervals.iter().all(|ci| ci.valid)
            )
            .unwrap();
            for ci in &r.intervals {
                write!(out, ",{},{}", e(ci.low), e(ci.high)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn fit_csv(&self) -> String {
        let mut out = String::from("x0,T,slope,intercept\n");
        for f in &self.fits {
            writeln!(out, "{},{},{},{}", f.x0, f.horizon, e(f.slope), e(f.intercept)).unwrap();
        }
        out
    }

    pub fn crosscheck_csv(&self) -> String {
        let mut out = String::from("quantity,x0,delta,t,s,mc,mc_se,oracle,z\n");
        for r in &self.crosscheck {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{:.4}",
                r.quantity,
                r.x0,
                r.delta,
                r.t,
                r.s,
                e(r.mc),
                e(r.mc_se),
                e(r.oracle),
                r.z_score()
            )
            .unwrap();
        }
        out
    }

    pub fn energy_csv(&self) -> String {
        let mut out = String::from("delta,t,rl_modulus,equi_ratio\n");
        for r in &self.energy {
            writeln!(out, "{},{},{},{}", r.delta, r.t, e(r.rl_modulus), e(r.equi_ratio)).unwrap();
        }
        out
    }

    /// Gnuplot data of the study's figure: blocks separated by two blank lines
    /// and introduced by a `#` comment.
    pub fn xy_dat(&self) -> Option<String> {
        let mut out = String::new();
        match self.config.study {
            Study::Rate => {
                for f in &self.fits {
                    writeln!(out, "# x0 = {} T = {} slope = {:.4}", f.x0, f.horizon, f.slope).unwrap();
                    for g in self
                        .summaries
                        .iter()
                        .filter(|g| g.x0 == f.x0 && g.horizon == f.horizon)
                    {
                        writeln!(out, "{} {}", e(g.delta.log10()), e(g.rmse.log10())).unwrap();
                    }
                    out.push_str("\n\n");
                }
            }
            Study::Normality => {
                if self.records.is_empty() {
                    return None;
                }
                for g in &self.summaries {
                    writeln!(
                        out,
                        "# x0 = {} delta = {} T = {} limit stddev = {}",
                        g.x0,
                        g.delta,
                        g.horizon,
                        e(g.asymptotic_stddev)
                    )
                    .unwrap();
                    let errors: Vec<f64> = self
                        .records
                        .iter()
                        .filter(|r| r.x0 == g.x0 && r.delta == g.delta && r.horizon == g.horizon)
                        .map(|r| r.scaled_error())
                        .collect();
                    let span = HISTOGRAM_SPAN * g.asymptotic_stddev;
                    for (x, density) in histogram(&errors, -span, span, HISTOGRAM_BINS) {
                        writeln!(out, "{} {}", e(x), e(density)).unwrap();
                    }
                    out.push_str("\n\n");
                }
            }
            Study::TimeHorizon => {
                for chunk in self.summaries.chunks(self.config.horizons.len()) {
                    writeln!(out, "# x0 = {} delta = {}", chunk[0].x0, chunk[0].delta).unwrap();
                    for g in chunk {
                        writeln!(out, "{} {}", g.horizon, e(g.stddev)).unwrap();
                    }
                    out.push_str("\n\n");
                }
            }
            _ => return None,
        }
        Some(out)
    }

    /// Limit normal densities for the histograms of `xy.dat`.
    pub fn overlay_dat(&self) -> Option<String> {
        if self.config.study != Study::Normality {
            return None;
        }
        let mut out = String::new();
        for g in &self.summaries {
            writeln!(out, "# x0 = {} delta = {} T = {}", g.x0, g.delta, g.horizon).unwrap();
            let sd = g.asymptotic_stddev;
            let points = 4 * HISTOGRAM_BINS;
            for i in 0..=points {
                let x = -HISTOGRAM_SPAN * sd + 2.0 * HISTOGRAM_SPAN * sd * i as f64 / points as f64;
                let density = (-0.5 * (x / sd).powi(2)).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt());
                writeln!(out, "{} {}", e(x), e(density)).unwrap();
            }
            out.push_str("\n\n");
        }
        Some(out)
    }

    /// Writes every output of the study to `dir` and returns the paths.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut put = |name: &str, text: &str| -> Result<()> {
            let path = dir.join(name);
            fs::write(&path, text)?;
            written.push(path);
            Ok(())
        };
        put("config.txt", &self.config.to_text())?;
        if !self.summaries.is_empty() {
            put("summary.csv", &self.summary_csv())?;
        }
        if !self.records.is_empty() {
            put("runs.csv", &self.runs_csv())?;
        }
        if !self.fits.is_empty() {
            put("fit.csv", &self.fit_csv())?;
        }
        if !self.horizon_ratios.is_empty() {
            let mut text = String::from("x0,delta,T_ref,T,stddev_ratio\n");
            for h in &self.horizon_ratios {
                writeln!(text, "{},{},{},{},{}", h.x0, h.delta, h.reference_horizon, h.horizon, e(h.ratio))
                    .unwrap();
            }
            put("horizon.csv", &text)?;
        }
        if !self.crosscheck.is_empty() {
            put("crosscheck.csv", &self.crosscheck_csv())?;
        }
        if !self.energy.is_empty() {
            put("energy.csv", &self.energy_csv())?;
        }
        if let Some(xy) = self.xy_dat() {
            put("xy.dat", &xy)?;
        }
        if let Some(overlay) = self.overlay_dat() {
            put("overlay.dat", &overlay)?;
        }
        for (name, snapshot) in &self.snapshots {
            let mut bytes = Vec::new();
            write_snapshot_csv(snapshot, &mut bytes)?;
            put(&format!("snapshot_{}.csv", name.replace(':', "_")), &String::from_utf8_lossy(&bytes))?;
        }
        Ok(written)
    }

    /// Writes to `<output>/<study>/`.
    pub fn write(&self) -> Result<Vec<PathBuf>> {
        self.write_to(&self.config.study_dir())
    }
}
