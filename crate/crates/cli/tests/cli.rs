//! End-to-end tests of the `relbell` binary and the scenario round trip.

use std::path::PathBuf;
use std::process::Command;

fn relbell() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relbell"))
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("relbell-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn table1_prints_default_grid() {
    let out = relbell().arg("table1").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 16);
    assert!(text.starts_with("two_lambda_p_nm,fwhm_nm,"));
}

#[test]
fn table1_empty_grid_is_header_only() {
    let out = relbell()
        .args(["table1", "--two-lambda-p", "", "--fwhm", ""])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
}

#[test]
fn table1_rejects_bad_numbers() {
    let out = relbell()
        .args(["table1", "--two-lambda-p", "13o9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_runs_and_emits_summary() {
    let csv_path = tmp_path("scan.csv");
    let out = relbell()
        .args(["scan", "--out"])
        .arg(&csv_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("global_visibility"));
    assert!(summary.contains("flagged_windows = 0"));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().count(), 217);
    std::fs::remove_file(&csv_path).ok();
}

#[test]
fn visibility_refits_a_scan_csv() {
    let csv_path = tmp_path("refit.csv");
    let out = relbell()
        .args(["scan", "--seed", "5", "--out"])
        .arg(&csv_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let refit = relbell()
        .args(["visibility", "--input"])
        .arg(&csv_path)
        .output()
        .unwrap();
    assert!(refit.status.success());
    let report = String::from_utf8(refit.stdout).unwrap();
    assert!(report.contains("# visibility refit"));
    assert!(report.contains("global_visibility"));
    std::fs::remove_file(&csv_path).ok();
}

#[test]
fn scenario_file_drives_the_scan() {
    let scenario_path = tmp_path("scenario.txt");
    std::fs::write(
        &scenario_path,
        "[model]\nmodel = test-theory\n[seed]\nseed = 31\n",
    )
    .unwrap();
    let out = relbell()
        .args(["scan", "--config"])
        .arg(&scenario_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("model = test-theory"));
    assert!(summary.contains("seed = 31"));
    assert!(summary.contains("flagged_window = "));
    std::fs::remove_file(&scenario_path).ok();
}

#[test]
fn unknown_scenario_key_exits_with_config_error() {
    let scenario_path = tmp_path("bad-scenario.txt");
    std::fs::write(&scenario_path, "[wheel]\nrotation_rpm = 10000\n").unwrap();
    let out = relbell()
        .args(["speed-bound", "--config"])
        .arg(&scenario_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("rotation_rpm"), "stderr: {err}");
    assert!(err.contains("line 2"), "stderr: {err}");
    std::fs::remove_file(&scenario_path).ok();
}

#[test]
fn model_and_seed_flags_override_scenario() {
    let out = relbell()
        .args(["scan", "--model", "test-theory", "--seed", "77"])
        .output()
        .unwrap();
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("model = test-theory"));
    assert!(summary.contains("seed = 77"));
}

#[test]
fn speed_bound_reports_paper_scale() {
    let out = relbell().arg("speed-bound").output().unwrap();
    assert!(out.status.success());
    let report = String::from_utf8(out.stdout).unwrap();
    let multiple: f64 = report
        .lines()
        .find_map(|l| l.strip_prefix("bound_multiple_of_c = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(multiple > 6e6 && multiple < 8e6, "multiple {multiple}");
}

#[test]
fn speed_bound_with_photon_counters_drops_to_1e5_scale() {
    // Unfiltered photons plus 300 ps-jitter counters: the bound falls to
    // the (1/3)·10⁶ c scale.
    let scenario_path = tmp_path("counters.txt");
    std::fs::write(
        &scenario_path,
        "[filter]\nfwhm_nm = 70\n[detectors]\njitter_sigma_s = 1.3e-10\n",
    )
    .unwrap();
    let out = relbell()
        .args(["speed-bound", "--config"])
        .arg(&scenario_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report = String::from_utf8(out.stdout).unwrap();
    let multiple: f64 = report
        .lines()
        .find_map(|l| l.strip_prefix("bound_multiple_of_c = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(multiple > 1.5e5 && multiple < 5e5, "multiple {multiple}");
    std::fs::remove_file(&scenario_path).ok();
}

#[test]
fn shipped_scenario_matches_the_preset() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/paper-1999.txt");
    let text = std::fs::read_to_string(path).unwrap();
    let config = relbell_cli::scenario::parse_scenario(&text).unwrap();
    assert_eq!(config, relbell_core::config::ExperimentConfig::paper_1999());
}

#[test]
fn shipped_after_after_scenario_stays_in_the_window() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/after-after.txt");
    let text = std::fs::read_to_string(path).unwrap();
    let config = relbell_cli::scenario::parse_scenario(&text).unwrap();
    let bins = relbell_core::experiment::simulate_scan(&config).unwrap();
    assert!(bins
        .iter()
        .all(|b| b.ordering == relbell_core::relativity::OrderingClass::AfterAfter));
}

#[test]
fn custom_lab_scale_bound() {
    // 20 m separation resolved to 20 fs gives 10^15 m/s.
    let bound = relbell_core::experiment::speed_bound(0.02, 2e-14).unwrap();
    assert!((bound.meters_per_second - 1e15).abs() / 1e15 < 1e-12);
}

#[test]
fn collapse_check_passes_and_exits_zero() {
    let out = relbell()
        .args(["collapse-check", "--trials", "300", "--seed", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.contains("result: PASS"));
}

#[test]
fn reports_are_byte_deterministic() {
    let speed_a = relbell().arg("speed-bound").output().unwrap();
    let speed_b = relbell().arg("speed-bound").output().unwrap();
    assert_eq!(speed_a.stdout, speed_b.stdout);
    let args = ["collapse-check", "--trials", "150", "--seed", "9"];
    let check_a = relbell().args(args).output().unwrap();
    let check_b = relbell().args(args).output().unwrap();
    assert_eq!(check_a.stdout, check_b.stdout);
    let table_a = relbell().arg("table1").output().unwrap();
    let table_b = relbell().arg("table1").output().unwrap();
    assert_eq!(table_a.stdout, table_b.stdout);
}

#[test]
fn collapse_check_zero_trials_warns() {
    let out = relbell()
        .args(["collapse-check", "--trials", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("vacuously"));
}
