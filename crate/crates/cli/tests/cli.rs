use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const LINE_SPECTRUM: &str = r#"{"omega0_rad_per_s": 1e15, "omega_p_rad_per_s": 1.5e8, "amplitude_m": 2e-7, "z0_m": 1e-6}"#;
const TIME_SURFACE: &str = r#"{"omega0_rad_per_s": 1e15, "omega_p_rad_per_s": 1.5e9, "amplitude_m": 2e-7, "z0_m": 1e-6}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oscmirror"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr_error_line(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr)
        .lines()
        .find(|l| l.starts_with("error "))
        .unwrap_or_default()
        .to_string()
}

#[test]
fn rate_csv_has_header_and_requested_rows() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "line.json", LINE_SPECTRUM);
    let out = dir.path().join("rate.csv");
    let o = run(&["rate", "--config", s(&cfg), "--t-end", "1e-6", "--n", "1000", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 1001);
    assert_eq!(lines[0], "t_s,gamma_over_a21");
    // B0 at the mean distance, 2 k0 z0 = 6.67128190396...
    assert_eq!(lines[1], "0.00000000e0,9.04228484e-1");
    // independent high-precision evaluation along the trajectory
    assert_eq!(lines[2], "1.00100100e-9,9.25520285e-1");
    assert_eq!(lines[1000], "1.00000000e-6,8.68863542e-1");
    assert!(out.with_file_name("rate.csv.meta.json").exists());
}

#[test]
fn first_order_rate_stays_close_to_exact() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "small.json", r#"{"omega0_rad_per_s": 1e15, "omega_p_rad_per_s": 1.5e8, "amplitude_m": 2e-8, "z0_m": 1e-6}"#);
    let exact = dir.path().join("e.csv");
    let first = dir.path().join("f.csv");
    assert_eq!(run(&["rate", "--config", s(&cfg), "--n", "50", "--out", s(&exact)]).status.code(), Some(0));
    let o = run(&["rate", "--config", s(&cfg), "--n", "50", "--order", "first", "--out", s(&first)]);
    assert_eq!(o.status.code(), Some(0));
    let col = |p: &Path| -> Vec<f64> {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect()
    };
    let (e, f) = (col(&exact), col(&first));
    assert_eq!(e[0], f[0]);
    // remainder (2 a k0)^2 / 2 * max |B0''| with 2 a k0 = 0.133
    for (a, b) in e.iter().zip(&f) {
        assert!((a - b).abs() < 0.01, "{a} {b}");
    }
}

#[test]
fn three_point_spectrum_has_four_lines() {
    let o = run(&["spectrum", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "delta_rad_per_s,p_static,p_dynamic,p_total");
    assert!(lines[2].starts_with("0.00000000e0,"));
}

#[test]
fn surface_is_long_format() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "surface.json", TIME_SURFACE);
    let o = run(&["surface", "--config", s(&cfg), "--n", "21", "--n-t", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "t_s,delta_rad_per_s,p_total");
    assert_eq!(lines.len(), 1 + 21 * 7);
    let first_t: Vec<_> = lines[1..22].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert!(first_t.iter().all(|t| *t == first_t[0]));
}

#[test]
fn outputs_are_byte_identical_across_runs_and_worker_counts() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |out: &Path, workers: &str| {
        run(&["spectrum", "--n", "2001", "--workers", workers, "--out", s(out)])
            .status
            .code()
    };
    assert_eq!(args(&a, "1"), Some(0));
    assert_eq!(args(&b, "4"), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let meta_a = std::fs::read_to_string(dir.path().join("a.csv.meta.json")).unwrap();
    let meta_b = std::fs::read_to_string(dir.path().join("b.csv.meta.json")).unwrap();
    assert_eq!(meta_a, meta_b);
    assert!(meta_a.contains("\"inputs_sha256\""));
}

#[test]
fn metadata_hash_tracks_inputs() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(run(&["spectrum", "--n", "11", "--out", s(&a)]).status.code(), Some(0));
    assert_eq!(run(&["spectrum", "--n", "13", "--out", s(&b)]).status.code(), Some(0));
    let hash = |p: &Path| -> String {
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v["inputs_sha256"].as_str().unwrap().to_string()
    };
    assert_ne!(hash(&dir.path().join("a.csv.meta.json")), hash(&dir.path().join("b.csv.meta.json")));
}

#[test]
fn peak_offsets_are_rows_of_the_spectrum() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "line.json", LINE_SPECTRUM);
    let csv = dir.path().join("s.csv");
    let js = dir.path().join("p.json");
    assert_eq!(run(&["spectrum", "--config", s(&cfg), "--n", "8001", "--out", s(&csv)]).status.code(), Some(0));
    assert_eq!(run(&["peaks", "--config", s(&cfg), "--out", s(&js)]).status.code(), Some(0));
    let peaks: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(&js).unwrap()).unwrap();
    let classes: Vec<&str> = peaks.iter().map(|p| p["class"].as_str().unwrap()).collect();
    for c in ["central", "plus_wp", "minus_wp"] {
        assert!(classes.contains(&c), "{classes:?}");
    }
    let text = std::fs::read_to_string(&csv).unwrap();
    for pk in &peaks {
        let offset = format!("{:.8e}", pk["offset"].as_f64().unwrap());
        let height = format!("{:.8e}", pk["height"].as_f64().unwrap());
        let row = text
            .lines()
            .find(|l| l.split(',').next() == Some(offset.as_str()))
            .unwrap_or_else(|| panic!("no row at {offset}"));
        assert_eq!(row.split(',').nth(3), Some(height.as_str()));
    }
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("p.json.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["extra"]["resolvability"]["resolvable"], true);
    assert_eq!(meta["extra"]["resolvability"]["linewidth"], 1.0);
}

#[test]
fn linewidth_flag_feeds_resolvability() {
    let dir = TempDir::new().unwrap();
    let js = dir.path().join("p.json");
    assert_eq!(run(&["peaks", "--linewidth", "1.5e8", "--n", "2001", "--out", s(&js)]).status.code(), Some(0));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("p.json.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["extra"]["resolvability"]["resolvable"], false);
    assert_eq!(meta["extra"]["resolvability"]["margin"], 1.0);
}

#[test]
fn validate_passes_on_the_presets() {
    let dir = TempDir::new().unwrap();
    for (name, cfg) in [("line.json", LINE_SPECTRUM), ("surface.json", TIME_SURFACE)] {
        let cfg = write(dir.path(), name, cfg);
        let out = dir.path().join("v.json");
        let o = run(&["validate", "--config", s(&cfg), "--out", s(&out)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let reports: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert!(reports.len() > 40);
        for r in &reports {
            assert_eq!(r["pass"], true, "{r}");
            for key in ["name", "closed_form", "quadrature", "abs_error", "rel_error", "tolerance", "nodes"] {
                assert!(r.get(key).is_some(), "{key}");
            }
        }
    }
}

#[test]
fn exit_0_on_help() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["rate", "--help"]).status.code(), Some(0));
}

#[test]
fn exit_2_on_missing_config() {
    let o = run(&["rate", "--config", "/definitely/missing.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr_error_line(&o).starts_with("error kind=config_io exit=2 message="));
}

#[test]
fn exit_2_on_malformed_or_invalid_config() {
    let dir = TempDir::new().unwrap();
    let unknown = write(dir.path(), "u.json", r#"{"omega0_rad_per_s": 1e15, "omega_p_rad_per_s": 1.5e8, "amplitude_m": 2e-7, "z0_m": 1e-6, "zz": 1}"#);
    let o = run(&["spectrum", "--config", s(&unknown)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr_error_line(&o).starts_with("error kind=config_format"));

    let negative = write(dir.path(), "n.json", r#"{"omega0_rad_per_s": 1e15, "omega_p_rad_per_s": 1.5e8, "amplitude_m": 2e-7, "z0_m": -1e-6}"#);
    let o = run(&["spectrum", "--config", s(&negative)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr_error_line(&o).starts_with("error kind=invalid_param"));
}

#[test]
fn exit_2_on_usage_errors() {
    for args in [
        vec!["rate", "--bogus"],
        vec!["frobnicate"],
        vec![],
        vec!["spectrum", "--t", "-1"],
        vec!["rate", "--n", "0"],
        vec!["spectrum", "--workers", "0"],
        vec!["sweep", "--param", "omega_p", "--from", "1e8", "--to", "1e9", "--what", "spectrum"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let line = stderr_error_line(&o);
        assert!(line.contains("exit=2"), "{args:?}: {line}");
    }
}

#[test]
fn exit_2_outside_adiabatic_regime_unless_allowed() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "big.json", r#"{"omega0_rad_per_s": 1e15, "omega_p_rad_per_s": 1.5e8, "amplitude_m": 9e-7, "z0_m": 1e-6}"#);
    let o = run(&["rate", "--config", s(&cfg), "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr_error_line(&o).starts_with("error kind=non_adiabatic"));
    let o = run(&["rate", "--config", s(&cfg), "--n", "5", "--allow-invalid"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn exit_3_when_an_oracle_check_fails() {
    // at a / z0 = 0.9 the first-order rate no longer scales quadratically
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "big.json", r#"{"omega0_rad_per_s": 1e15, "omega_p_rad_per_s": 1.5e8, "amplitude_m": 9e-7, "z0_m": 1e-6}"#);
    let out = dir.path().join("v.json");
    let o = run(&["validate", "--config", s(&cfg), "--allow-invalid", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(3));
    let line = stderr_error_line(&o);
    assert!(line.starts_with("error kind=validation exit=3"), "{line}");
    assert!(line.contains("scaling/first_order_rate"));
    // the report is still written
    let reports: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(reports.iter().any(|r| r["pass"] == false));
}

#[test]
fn exit_4_on_unwritable_output() {
    let o = run(&["rate", "--n", "3", "--out", "/nonexistent-dir/rate.csv"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr_error_line(&o).starts_with("error kind=io exit=4"));
}

#[test]
fn exit_4_when_sweep_directory_cannot_be_created() {
    let dir = TempDir::new().unwrap();
    let blocker = write(dir.path(), "file", "x");
    let target = blocker.join("sub");
    let o = run(&[
        "sweep", "--param", "omega_p", "--from", "1.5e8", "--to", "1.5e9", "--points", "2", "--what", "rate", "--n", "3",
        "--out", s(&target),
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn sweep_writes_one_file_per_point_and_an_index() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("sweep");
    let o = run(&[
        "sweep", "--param", "omega_p", "--from", "1.5e8", "--to", "1.5e9", "--points", "3", "--what", "spectrum", "--n",
        "101", "--out", s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let index: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("index.json")).unwrap()).unwrap();
    let points = index["points"].as_array().unwrap();
    assert_eq!(points.len(), 3);
    assert_eq!(points[0]["value"], 1.5e8);
    assert_eq!(points[2]["value"], 1.5e9);
    for p in points {
        let f = out.join(p["file"].as_str().unwrap());
        let text = std::fs::read_to_string(f).unwrap();
        assert_eq!(text.lines().count(), 102);
        assert!(text.starts_with("delta_rad_per_s,p_static,p_dynamic,p_total\n"));
    }
    let hashes: Vec<_> = points.iter().map(|p| p["inputs_sha256"].as_str().unwrap()).collect();
    assert_ne!(hashes[0], hashes[1]);

    let again = dir.path().join("again");
    let o = run(&[
        "sweep", "--param", "omega_p", "--from", "1.5e8", "--to", "1.5e9", "--points", "3", "--what", "spectrum", "--n",
        "101", "--out", s(&again),
    ]);
    assert_eq!(o.status.code(), Some(0));
    for name in ["index.json", "spectrum_000.csv", "spectrum_002.csv"] {
        assert_eq!(std::fs::read(out.join(name)).unwrap(), std::fs::read(again.join(name)).unwrap());
    }
}

#[test]
fn sweep_rejects_invalid_points() {
    let dir = TempDir::new().unwrap();
    let o = run(&[
        "sweep", "--param", "amplitude", "--from", "0", "--to", "2e-6", "--points", "3", "--grid", "linear", "--what",
        "rate", "--out", s(&dir.path().join("x")),
    ]);
    assert_eq!(o.status.code(), Some(2));
}
