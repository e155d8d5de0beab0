use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn stochwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stochwave"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("exp.cfg");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn energy_sweep_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_string_lossy().into_owned();
    let status = stochwave(&["energy", "--out", &out]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let text = fs::read_to_string(dir.path().join("energy/energy.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("delta,t,rl_modulus,equi_ratio"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    for r in rows.iter().filter(|r| r[1] == 0.0) {
        assert_eq!(r[3], 1.0);
    }
    let last = rows.last().unwrap();
    assert_eq!(last[0], 0.01);
    assert!((0.45..=0.55).contains(&last[3]), "{last:?}");
}

#[test]
fn missing_config_names_the_path() {
    let out = stochwave(&["--config", "/definitely/not/here.cfg", "energy"]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("/definitely/not/here.cfg"), "{stderr}");
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "study = coverage\nrunz = 3\n");
    let out = stochwave(&["--config", &cfg, "coverage"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("runz"));
}

#[test]
fn snapshot_is_deterministic_and_covers_both_media() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "M = 64\ndelta = 0.4\nx0 = 0.5\nT = 0.5\n");
    let read = |sub: &str| {
        let out = dir.path().join(sub);
        let o = stochwave(&["--config", &cfg, "--seed", "7", "--out", out.to_str().unwrap(), "snapshot"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (
            fs::read_to_string(out.join("snapshot/snapshot_a.csv")).unwrap(),
            fs::read_to_string(out.join("snapshot/snapshot_b.csv")).unwrap(),
        )
    };
    let first = read("one");
    let second = read("two");
    assert_eq!(first, second);

    let rows: Vec<(f64, f64)> = first
        .1
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[0], f[1])
        })
        .collect();
    let mut times: Vec<f64> = rows.iter().map(|r| r.0).collect();
    times.dedup();
    let mut xs: Vec<f64> = rows.iter().map(|r| r.1).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    assert_eq!(rows.len(), times.len() * xs.len());
    assert!(xs.iter().any(|&x| x < 0.5) && xs.iter().any(|&x| x > 0.5));
}

#[test]
fn simulate_then_estimate_from_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "M = 64\ndelta = 0.4\nx0 = 0.5\nT = 1\nalpha = 0.1\n");
    let out = dir.path().to_string_lossy().into_owned();
    let sim = stochwave(&["--config", &cfg, "--out", &out, "simulate"]);
    assert!(sim.status.success(), "{}", String::from_utf8_lossy(&sim.stderr));
    let series = dir.path().join("simulate/series_x0=0.5_delta=0.4.csv");
    assert!(series.exists());

    let direct = stochwave(&["--config", &cfg, "--out", &out, "estimate"]);
    assert!(direct.status.success());
    let from_file = stochwave(&[
        "--config",
        &cfg,
        "--out",
        &out,
        "estimate",
        "--series",
        series.to_str().unwrap(),
        "--x0",
        "0.5",
        "--delta",
        "0.4",
    ]);
    assert!(from_file.status.success(), "{}", String::from_utf8_lossy(&from_file.stderr));
    // same θ̂ and interval; only the seed column differs
    let row = |o: &Output| {
        let text = String::from_utf8_lossy(&o.stdout).into_owned();
        let line = text.lines().nth(1).unwrap().to_string();
        line.split(',').skip(1).map(str::to_owned).collect::<Vec<_>>()
    };
    assert_eq!(row(&direct), row(&from_file));
}

#[test]
fn version_prints_kernel_constants() {
    let out = stochwave(&["--version"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("4.135647050178e-7"), "{text}");
    assert!(text.contains("3.310108234748e-5"), "{text}");
}

#[test]
fn paper_scale_only_changes_the_resolution() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "M = 64\ndelta = 0.4\nx0 = 0.5\nT = 0.01\nruns = 2\n");
    let out = dir.path().to_string_lossy().into_owned();
    let o = stochwave(&["--config", &cfg, "--out", &out, "--paper-scale", "coverage"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let written = fs::read_to_string(dir.path().join("coverage/config.txt")).unwrap();
    assert!(written.contains("M = 1000"));
    assert!(written.contains("runs = 2"));
    assert!(written.contains("seed = 2024"));
}
