use std::path::Path;
use std::process::{Command, Output};

use coherence_flow::cli::CSV_HEADER;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coherence-flow"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn parse_csv(text: &str) -> Vec<Vec<f64>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect()
}

fn figure(fixture: &str, extra: &[&str]) -> Vec<Vec<f64>> {
    let mut args = vec!["figure", "--fixture", fixture];
    args.extend_from_slice(extra);
    let out = run(&args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    parse_csv(&String::from_utf8(out.stdout).unwrap())
}

// Column indices of the CSV schema.
const P: usize = 0;
const C_S: usize = 2;
const C_E: usize = 3;
const C_NL: usize = 5;
const GAP: usize = 7;

#[test]
fn sweep_writes_file_with_exact_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("adc.csv");
    let out = run(&[
        "sweep",
        "--channel",
        "adc",
        "--bloch=-0.41,0.80,-0.38",
        "--steps",
        "11",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    let rows = parse_csv(&text);
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[10][P], 1.0);
}

#[test]
fn fig1_gap_vanishes_at_endpoints() {
    for series in ["0", "1"] {
        let rows = figure("fig1", &["--series", series]);
        assert!(rows[0][GAP].abs() < 1e-10);
        assert!(rows[100][GAP].abs() < 1e-10);
        assert!(rows[1..100].iter().all(|r| r[GAP] > 0.0));
    }
    assert_eq!(
        run(&["figure", "--fixture", "fig1", "--series", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn fig2_midpoint_split() {
    let rows = figure("fig2", &[]);
    let mid = &rows[50];
    assert_eq!(mid[P], 0.5);
    assert!((mid[C_S] - 0.11).abs() < 1e-10);
    assert!((mid[C_E] - 0.11).abs() < 1e-10);
}

#[test]
fn fig3_kink_at_half() {
    let rows = figure("fig3", &[]);
    assert!(rows[50][C_S].abs() < 1e-10);
    assert!(rows[49][C_S] > 0.0 && rows[51][C_S] > 0.0);
    assert!((rows[0][C_S] - rows[100][C_S]).abs() < 1e-10);
}

#[test]
fn fig4_catalyst() {
    let rows = figure("fig4", &[]);
    assert!(rows.iter().all(|r| r[C_S] == 0.0 && r[C_E] == 0.0));
    assert!((rows[100][C_NL] - 3.0).abs() < 1e-9);
}

#[test]
fn verify_is_deterministic_and_passes() {
    let args = ["verify", "--n-states", "40", "--steps", "21", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.trim_end().ends_with("overall: PASS"));
    assert_eq!(text.matches("[PASS]").count(), 6);
}

#[test]
fn verify_out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let args = [
        "verify",
        "--channel",
        "bfc",
        "--channel",
        "dc",
        "--n-states",
        "10",
    ];
    let stdout = run(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(run(&with_out).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn zero_tolerance_fails_verification() {
    let out = run(&[
        "verify",
        "--channel",
        "pdc",
        "--n-states",
        "20",
        "--tolerance",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("overall: FAIL"));
}

#[test]
fn invalid_input_exits_with_two() {
    let cases: &[&[&str]] = &[
        &["sweep", "--channel", "xyz", "--bloch=0,0,0"],
        &["sweep", "--channel", "adc", "--bloch=1,1,1"],
        &["sweep", "--channel", "adc", "--bloch=0.1,0.2"],
        &["sweep", "--channel", "adc"],
        &["sweep", "--channel", "adc", "--bloch=0,0,0", "--steps", "1"],
        &["figure", "--fixture", "fig9"],
        &["verify", "--n-states", "0"],
        &["verify", "--tolerance", "-1"],
        &["bogus"],
    ];
    for args in cases {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unwritable_output_exits_with_two() {
    let missing = Path::new("/nonexistent-dir/out.csv");
    let out = run(&[
        "figure",
        "--fixture",
        "fig2",
        "--out",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seeded_sweep_is_reproducible() {
    let args = ["sweep", "--channel", "pfc", "--seed", "31", "--steps", "5"];
    let a = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, run(&args).stdout);
}
