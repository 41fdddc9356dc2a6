use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use opo_cli::CSV_HEADER;

fn opo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.toml");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const BASE: &str = "[cavity]\nkappa = 0.01\ng = 0.001\n[drive]\nsigma = 1\n";

#[test]
fn spectra_csv_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{BASE}[sweep]\nc_list = [0, 1]\n"));
    let out = dir.path().join("s.csv");
    let o = opo(&["spectra", "--config", &cfg, "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.count(), 400);
}

#[test]
fn csv_is_byte_identical_across_runs_and_threads() {
    let args = ["spectra", "--sigma", "1.1", "--coupling", "0.2", "--omega-points", "300"];
    let first = opo(&args);
    let serial = opo(&[&args[..], &["--threads", "1"]].concat());
    let four = opo(&[&args[..], &["--threads", "4"]].concat());
    assert!(first.status.success());
    assert_eq!(first.stdout, serial.stdout);
    assert_eq!(first.stdout, four.stdout);
}

#[test]
fn config_errors_exit_one_with_key_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{BASE}pump_intensity = 3\n"));
    let o = opo(&["spectra", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("drive.sigma") && err.contains("drive.pump_intensity"), "{err}");

    let o = opo(&["spectra", "--omega-min", "1", "--omega-max", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sweep.omega_max"));

    let o = opo(&["spectra", "--config", "/nonexistent/run.toml"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn figures_write_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("fig2");
    let o = opo(&["figure", "--id", "2", "--output", stem.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(stem.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6 * 200);
    let svg = fs::read_to_string(stem.with_extension("svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 12);

    let stem = dir.path().join("fig3");
    let o = opo(&["figure", "--id", "3", "--output", stem.to_str().unwrap()]);
    assert!(o.status.success());
    let svg = fs::read_to_string(stem.with_extension("svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 6);

    assert_eq!(opo(&["figure", "--id", "4"]).status.code(), Some(1));
}

#[test]
fn validate_exit_codes() {
    let o = opo(&["validate", "--omega-points", "40"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let report = String::from_utf8_lossy(&o.stdout);
    assert!(report.contains("pump-variance reconciliation"));

    let o = opo(&["validate", "--omega-points", "40", "--sigma", "1.1", "--pump-variance", "1"]);
    assert_eq!(o.status.code(), Some(3));

    let o = opo(&["validate", "--omega-points", "40", "--sigma", "1", "--pump-variance", "1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn threshold_and_steady_state_reports() {
    let o = opo(&["threshold"]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    let lowest: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("lowest_threshold = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((lowest - 200.0).abs() < 1e-12 * 200.0, "{text}");
    assert!(text.contains("stationary = true"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[cavity]\nkappa = 0.02\ng = 0.002\n[drive]\npump_intensity = 800\n");
    let o = opo(&["steady-state", "--config", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("sigma = 2"), "{text}");
    assert!(text.contains("mode_intensity = 5e3"), "{text}");
    assert!(text.contains("stokes_a = 10000 0 0 10000"), "{text}");
}

#[test]
fn unwritable_output_is_reported() {
    let o = opo(&["spectra", "--output", "/nonexistent/dir/out.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot write"));
}

#[test]
fn svg_format_flag() {
    let o = opo(&["criteria", "--format", "svg", "--coupling", "1", "--omega-points", "50"]);
    assert!(o.status.success());
    let svg = String::from_utf8_lossy(&o.stdout);
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<polyline").count(), 3);
}
