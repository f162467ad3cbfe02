//! End-to-end checks of the `hipsim` binary: flag surface, determinism, and
//! the golden sweep output.

use std::path::Path;
use std::process::{Command, Output};

fn hipsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hipsim"))
        .args(args)
        .env_remove("HIPSIM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn field(line: &str, key: &str) -> f64 {
    line.split_whitespace()
        .find_map(|tok| tok.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key}= in {line:?}"))
        .parse()
        .unwrap()
}

#[test]
fn bounds_prints_the_enhanced_workload_anchor() {
    let out = stdout_of(&hipsim(&[
        "bounds", "--scheme", "enhanced", "--n", "1000000", "--L", "10", "--l", "5",
    ]));
    let log2 = field(out.lines().nth(1).unwrap(), "log2_workload");
    assert!((log2 - 27.32).abs() < 0.01, "log2={log2}");
}

#[test]
fn honest_simulation_always_accepts() {
    let out = stdout_of(&hipsim(&[
        "simulate", "--scheme", "basic", "--k", "20", "--user", "honest", "--trials", "200",
        "--n", "64",
    ]));
    assert!(out.contains("accept_rate=1\n"), "{out}");
}

#[test]
fn estimate_is_deterministic_and_env_seeded() {
    let args =
        ["estimate", "--claim", "intersection_size", "--n", "256", "--t", "2", "--trials", "200"];
    let a = stdout_of(&hipsim(&args));
    let b = stdout_of(&hipsim(&args));
    assert_eq!(a, b, "same config and seed must reproduce bit-identical output");

    let seeded = Command::new(env!("CARGO_BIN_EXE_hipsim"))
        .args(args)
        .env("HIPSIM_SEED", "999")
        .output()
        .unwrap();
    let c = String::from_utf8(seeded.stdout).unwrap();
    assert!(c.contains("seed=999"), "{c}");
    assert_ne!(a, c, "HIPSIM_SEED must override --seed");
}

#[test]
fn sweep_fig6_matches_the_golden_file() {
    let out = stdout_of(&hipsim(&["sweep", "--figure", "fig6"]));
    let golden = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/fig6.csv"),
    )
    .unwrap();
    assert_eq!(out, golden);
}

#[test]
fn sweep_fig8_is_strictly_decreasing() {
    let out = stdout_of(&hipsim(&["sweep", "--figure", "fig8"]));
    let col: Vec<f64> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(col.len(), 10);
    assert!(col.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn sweep_writes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig7.csv");
    stdout_of(&hipsim(&["sweep", "--figure", "fig7", "--out", path.to_str().unwrap()]));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n,N,basic_work,enhanced_work,practical_work\n"));
    assert_eq!(text.lines().count(), 18);
}

#[test]
fn basic_attack_reports_steps_near_the_idealized_cost() {
    let out = stdout_of(&hipsim(&[
        "attack", "--scheme", "basic", "--n", "1024", "--trials", "300", "--seed", "7",
    ]));
    let steps_line = out.lines().find(|l| l.contains("mean_steps=")).unwrap();
    let mean = field(steps_line, "mean_steps");
    // exact cost is log2 n plus the extinction tail
    assert!(mean > 10.0 && mean < 12.5, "mean={mean}");
    let success_line = out.lines().find(|l| l.contains("success_rate=")).unwrap();
    assert_eq!(field(success_line, "success_rate"), 1.0);
}

#[test]
fn attack_trace_lines_are_pipe_formatted() {
    let out = stdout_of(&hipsim(&[
        "attack", "--scheme", "basic", "--n", "64", "--trials", "1", "--seed", "3", "--trace",
    ]));
    let trace: Vec<&str> =
        out.lines().filter(|l| l.chars().next().is_some_and(|c| c.is_ascii_digit())).collect();
    assert!(!trace.is_empty());
    for line in trace {
        assert_eq!(line.split('|').count(), 5, "{line}");
    }
}

#[test]
fn transcripts_are_written_and_pipe_formatted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("transcripts.txt");
    stdout_of(&hipsim(&[
        "simulate", "--scheme", "enhanced", "--trials", "2", "--k", "3", "--n", "32", "--L", "4",
        "--l", "2", "--out", path.to_str().unwrap(), "--seed", "11",
    ]));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8); // 2 sessions x (header + 3 rounds)
    assert!(lines[0].starts_with("session|0|seed="));
    // each round line: index|4 pictures|4 answer bits
    let round = lines[1];
    let parts: Vec<&str> = round.split('|').collect();
    assert_eq!(parts.len(), 3);
    assert_eq!(parts[1].split(',').count(), 4);
    assert_eq!(parts[2].len(), 4);
}

#[test]
fn unknown_figure_and_estimator_fail_with_nonzero_exit() {
    let bad_fig = hipsim(&["sweep", "--figure", "fig9"]);
    assert!(!bad_fig.status.success());
    let bad_claim = hipsim(&["estimate", "--claim", "nope", "--trials", "100"]);
    assert!(!bad_claim.status.success());
    let err = String::from_utf8_lossy(&bad_claim.stderr);
    assert!(err.contains("basic_steps"), "error should list estimators: {err}");
}

#[test]
fn named_features_demo_annotates_rounds() {
    let out = stdout_of(&hipsim(&[
        "simulate", "--scheme", "practical", "--named-features", "--trials", "1", "--k", "3",
        "--L", "4", "--seed", "5",
    ]));
    assert!(out.contains("secret question: does the box show"));
    assert!(out.contains("round 1: box "));
    // the bundled table backs the demo universe
    let bad = hipsim(&["simulate", "--scheme", "basic", "--named-features", "--trials", "1"]);
    assert!(!bad.status.success());
}
