use std::io::{BufRead, Write};

use super::{MeasurementSeries, Snapshot};
use crate::{Error, Result};

pub const SERIES_HEADER: &str = "k,t,u_delta,u_delta_lap,v_delta";
pub const SNAPSHOT_HEADER: &str = "t,x,u,v";

/// Writes `k,t,u_delta,u_delta_lap,v_delta`, one row per time index.
pub fn write_series_csv<W: Write>(series: &MeasurementSeries, mut out: W) -> Result<()> {
    writeln!(out, "{SERIES_HEADER}")?;
    for k in 0..=series.steps() {
        writeln!(
            out,
            "{},{},{},{},{}",
            k,
            k as f64 * series.dt,
            series.u[k],
            series.u_lap[k],
            series.v[k]
        )?;
    }
    Ok(())
}

/// Reads a series written by [`write_series_csv`]. Metadata that the file
/// does not carry (`x0`, `delta`, `seed`, `‖K‖`) is taken from the arguments.
pub fn read_series_csv<R: BufRead>(
    input: R,
    x0: f64,
    delta: f64,
    seed: u64,
    kernel_l2_norm: f64,
) -> Result<MeasurementSeries> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .transpose()?
        .ok_or_else(|| Error::Config("empty series file".into()))?;
    if header.trim() != SERIES_HEADER {
        return Err(Error::Config(format!(
            "unexpected series header `{}` (expected `{SERIES_HEADER}`)",
            header.trim()
        )));
    }
    let (mut u, mut u_lap, mut v, mut times) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (row, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Config(format!("row {}: expected 5 fields", row + 1)));
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse()
                .map_err(|_| Error::Config(format!("row {}: bad number `{s}`", row + 1)))
        };
        times.push(parse(fields[1])?);
        u.push(parse(fields[2])?);
        u_lap.push(parse(fields[3])?);
        v.push(parse(fields[4])?);
    }
    if u.len() < 2 {
        return Err(Error::Config("series needs at least two rows".into()));
    }
    let dt = times[1] - times[0];
    Ok(MeasurementSeries {
        x0,
        delta,
        dt,
        seed,
        kernel_l2_norm,
        u,
        u_lap,
        v,
        diagnostics: None,
    })
}

/// Writes `t,x,u,v`, row-major by time.
pub fn write_snapshot_csv<W: Write>(snapshot: &Snapshot, mut out: W) -> Result<()> {
    writeln!(out, "{SNAPSHOT_HEADER}")?;
    let nx = snapshot.xs.len();
    for (i, t) in snapshot.times.iter().enumerate() {
        for (j, x) in snapshot.xs.iter().enumerate() {
            let idx = i * nx + j;
            writeln!(out, "{t},{x},{},{}", snapshot.u[idx], snapshot.v[idx])?;
        }
    }
    Ok(())
}
