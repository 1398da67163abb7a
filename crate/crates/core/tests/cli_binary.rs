use std::path::Path;
use std::process::{Command, Output};

use perturba::cli::{self, CONFIG_ENV_VAR, CSV_HEADER};

fn perturba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perturba")).args(args).env_remove(CONFIG_ENV_VAR).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("perturba.cfg");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn presets_listing() {
    let out = perturba(&["presets"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 9);
    assert!(text.lines().any(|l| l.starts_with("time-d,time,")));
}

#[test]
fn sweep_to_stdout_parses_back() {
    let out = perturba(&["sweep", "--preset", "time-a", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with(CSV_HEADER));
    assert_eq!(cli::parse_csv(&text).unwrap().len(), 5);
}

#[test]
fn sweep_is_deterministic() {
    let args = ["sweep", "--mode", "field", "--fixed", "1", "--start", "1e-4", "--stop", "1e-2", "--samples", "300", "--scale", "log"];
    let (a, b) = (perturba(&args), perturba(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curves.csv");
    let out = perturba(&["sweep", "--preset", "field-2", "--samples", "11", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let rows = cli::parse_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 11);
}

#[test]
fn invalid_spec_exits_with_one() {
    let out = perturba(&["sweep", "--mode", "time", "--start", "1", "--stop", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert_eq!(perturba(&["sweep", "--start", "0"]).status.code(), Some(1));
    assert_eq!(perturba(&["sweep", "--preset", "nope"]).status.code(), Some(1));
    assert_eq!(perturba(&["report", "--preset", "field-1"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_one_and_help_with_zero() {
    assert_eq!(perturba(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(perturba(&["sweep", "--samples", "many"]).status.code(), Some(1));
    assert_eq!(perturba(&["--help"]).status.code(), Some(0));
}

#[test]
fn io_failures_exit_with_two() {
    let out = perturba(&["sweep", "--preset", "time-a", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(perturba(&["--config", "/nonexistent-dir/a.cfg", "presets"]).status.code(), Some(2));
}

#[test]
fn report_line() {
    let out = perturba(&["report", "--start", "0", "--stop", "30", "--samples", "3001", "--threshold", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("field_T,threshold,t_traditional_s,t_improved_s"));
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(fields[2..], ["inf", "inf"]);
}

#[test]
fn config_file_sets_field_and_constants() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "# unit hyperfine energy\nplanck_h = 4\ndelta_nu_h = 1\nelementary_charge = 1\nmu_e = 0.1\nb_field = 1\n");
    let out = perturba(&["--config", &cfg, "levels"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let level1: Vec<f64> = text.lines().nth(2).unwrap().split(',').skip(1).map(|v| v.parse().unwrap()).collect();
    // diagonal W + mu B with no corrections
    assert!((level1[0] - 1.1).abs() <= 1e-15 && level1[4] == level1[0]);

    let via_env = Command::new(env!("CARGO_BIN_EXE_perturba"))
        .arg("levels")
        .env(CONFIG_ENV_VAR, &cfg)
        .output()
        .unwrap();
    assert_eq!(via_env.stdout, out.stdout);
}

#[test]
fn bad_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    for body in ["colour = blue\n", "mu_e = fast\n", "planck_h = -1\n", "just words\n"] {
        let cfg = write_config(dir.path(), body);
        assert_eq!(perturba(&["--config", &cfg, "presets"]).status.code(), Some(1), "{body}");
    }
}
