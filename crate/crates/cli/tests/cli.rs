//! End-to-end checks of the installed binary: exit codes, summary formats,
//! and trace files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn alfsynth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alfsynth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn config(name: &str) -> String {
    configs_dir().join(name).display().to_string()
}

#[test]
fn run_reports_convergence_with_exit_zero() {
    let out = alfsynth(&["run", &config("interval.json")]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("converged in 4 round(s): [-2, inf]"), "{stdout}");
}

#[test]
fn run_exit_codes_match_outcomes() {
    assert_eq!(alfsynth(&["run", &config("budget0.json")]).status.code(), Some(2));
    assert_eq!(
        alfsynth(&["run", &config("houdini_unrealizable.json")]).status.code(),
        Some(3)
    );
}

#[test]
fn errors_and_usage_problems_exit_one() {
    assert_eq!(alfsynth(&["run", "no-such-file.json"]).status.code(), Some(1));
    assert_eq!(alfsynth(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(alfsynth(&[]).status.code(), Some(1));

    // A config missing its budget names the field.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"kind":"interval","params":{}}"#).unwrap();
    let out = alfsynth(&["run", &bad.display().to_string()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("budget"), "{stderr}");
}

#[test]
fn run_writes_a_replayable_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace_path = dir.path().join("t.json");
    let out = alfsynth(&[
        "run",
        &config("interval.json"),
        "--trace",
        &trace_path.display().to_string(),
        "--checked",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let bytes = std::fs::read(&trace_path).unwrap();
    let doc = alfsynth_core::trace::TraceDocument::from_json_bytes(&bytes).unwrap();
    assert_eq!(doc.rounds.len(), 4);
    assert!(matches!(
        doc.outcome,
        alfsynth_core::trace::OutcomeRecord::Converged { ref hypothesis, rounds: 4 }
            if hypothesis == "[-2, inf]"
    ));

    // Rerunning the same config reproduces the file byte for byte.
    let trace2 = dir.path().join("t2.json");
    let out = alfsynth(&[
        "run",
        &config("interval.json"),
        "--trace",
        &trace2.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(bytes, std::fs::read(&trace2).unwrap());
}

#[test]
fn run_formats_summaries_as_json_and_csv() {
    let out = alfsynth(&["run", &config("interval.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["outcome"], "converged");
    assert_eq!(value["rounds"], 4);
    assert_eq!(value["hypothesis"], "[-2, inf]");

    let out = alfsynth(&["run", &config("interval.json"), "--format", "csv"]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("config,kind,outcome,rounds,hypothesis"));
    assert!(lines.next().unwrap().ends_with(r#"interval,converged,4,"[-2, inf]""#));
}

#[test]
fn suite_emits_one_csv_row_per_config() {
    let out = alfsynth(&["suite", &configs_dir().display().to_string()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "config,kind,outcome,rounds,hypothesis");
    let configs = std::fs::read_dir(configs_dir())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json"))
        .count();
    assert_eq!(lines.len(), configs + 1);
    // Rows are ordered by config file name.
    let names: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn laws_subcommand_reports_zero_violations_for_small_universes() {
    let out = alfsynth(&["laws", &config("ice_small.json")]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("0 violations"), "{stdout}");

    let out = alfsynth(&["laws", &config("interval.json")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn state_cap_override_refuses_oversized_instances() {
    let out = Command::new(env!("CARGO_BIN_EXE_alfsynth"))
        .args(["run", &config("houdini.json")])
        .env("ALFSYNTH_MAX_STATES", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("16 states"), "{stderr}");
}
