//! End-to-end tests for the command-line interface: exit codes, output
//! formats, file handling, and byte-level determinism of repeated runs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fuzzyseq"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn write_file(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).expect("scratch file writes");
    path
}

/// A small passing case document: the square-indicator mean at a short
/// horizon, with one claim of each kind.
const BOX_CASE: &str = "\
# square-counting mean over a short window
scheme.u    = 1/k
scheme.v    = 1
start_index = 1
modulus     = id
exponents   = 1
horizon     = 100
sequences.X = select(k is_square, crisp(1), crisp(0))
claim       = value X 100 0.1 1e-12
claim       = closed_form X floor(sqrt(k))/k 1e-12
claim       = verdict X linf consistent
";

// ---------------------------------------------------------------------------
// dist
// ---------------------------------------------------------------------------

#[test]
fn dist_prints_the_distance_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_file(dir.path(), "a.fz", "crisp(2)\n");
    let b = write_file(dir.path(), "b.fz", "crisp(5)\n");
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());

    let text = run(&["dist", a, b]);
    assert_eq!(code(&text), 0, "stderr: {}", stderr(&text));
    assert_eq!(stdout(&text), "d = 3.0000000000000000e0\n");

    let csv = run(&["dist", a, b, "--format", "csv"]);
    assert_eq!(code(&csv), 0);
    assert_eq!(stdout(&csv), "d\n3.0000000000000000e0\n");
}

#[test]
fn dist_rejects_a_missing_file_with_a_usage_error() {
    let output = run(&["dist", "/nonexistent/a.fz", "/nonexistent/b.fz"]);
    assert_eq!(code(&output), 2);
    assert!(stderr(&output).starts_with("error:"), "stderr: {}", stderr(&output));
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

#[test]
fn validate_accepts_level_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "tri.fz", "0 -2 4\n0.5 -1 3\n1 0 1\n");
    let output = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&output), 0, "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("[pass] representation"), "got: {text}");
    assert!(text.contains("support"), "got: {text}");
    assert!(text.ends_with("status: valid\n"), "got: {text}");
}

#[test]
fn validate_flags_broken_nesting() {
    let dir = tempfile::tempdir().unwrap();
    // The core is wider than the support: cuts must shrink as alpha grows.
    let path = write_file(dir.path(), "bad.fz", "0 -1 1\n1 -2 2\n");
    let output = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&output), 1);
    let text = stdout(&output);
    assert!(text.contains("[fail] representation"), "got: {text}");
    assert!(text.contains("[fail] violation"), "got: {text}");
    assert!(text.ends_with("status: invalid\n"), "got: {text}");
}

#[test]
fn validate_evaluates_case_claims() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "box.case", BOX_CASE);
    let output = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&output), 0, "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("[pass] parse: 1 sequence(s), 3 claim(s)"), "got: {text}");
    assert_eq!(text.matches("[pass] claim").count(), 3, "got: {text}");
    assert!(text.ends_with("status: valid\n"), "got: {text}");
}

#[test]
fn validate_reports_failing_claims_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let wrong = BOX_CASE.replace("value X 100 0.1 1e-12", "value X 100 0.5 1e-12");
    let path = write_file(dir.path(), "wrong.case", &wrong);
    let output = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&output), 1);
    let text = stdout(&output);
    assert!(text.contains("[fail] claim"), "got: {text}");
    assert!(text.ends_with("status: invalid\n"), "got: {text}");
}

#[test]
fn validate_emits_csv_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "box.case", BOX_CASE);
    let output = run(&["validate", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&output), 0);
    let text = stdout(&output);
    assert!(text.starts_with("check,pass,detail\n"), "got: {text}");
    assert!(text.contains("parse,true"), "got: {text}");
}

// ---------------------------------------------------------------------------
// transform
// ---------------------------------------------------------------------------

#[test]
fn transform_emits_window_rows_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "box.case", BOX_CASE);
    let output =
        run(&["transform", path.to_str().unwrap(), "--seq", "X", "--horizon", "10"]);
    assert_eq!(code(&output), 0, "stderr: {}", stderr(&output));
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "seq,k,t,s");
    assert_eq!(lines.len(), 11, "header plus ten rows, got: {text}");
    // At k = 4 two squares have passed: t = 2/4 and s = t under the
    // identity modulus with unit exponents.
    assert_eq!(lines[4], "X,4,5.0000000000000000e-1,5.0000000000000000e-1");
}

#[test]
fn transform_rejects_unknown_sequences_and_bad_horizons() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "box.case", BOX_CASE);
    let unknown = run(&["transform", path.to_str().unwrap(), "--seq", "Y"]);
    assert_eq!(code(&unknown), 2);
    assert!(stderr(&unknown).contains("unknown sequence 'Y'"), "got: {}", stderr(&unknown));

    let below = run(&["transform", path.to_str().unwrap(), "--horizon", "0"]);
    assert_eq!(code(&below), 2);
    assert!(stderr(&below).contains("below the start index"), "got: {}", stderr(&below));
}

#[test]
fn transform_writes_the_same_bytes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "box.case", BOX_CASE);
    let case = path.to_str().unwrap();
    let on_stdout = run(&["transform", case, "--horizon", "25"]);
    assert_eq!(code(&on_stdout), 0);

    let out_path = dir.path().join("nested").join("dump.csv");
    let to_file =
        run(&["transform", case, "--horizon", "25", "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&to_file), 0);
    assert!(stdout(&to_file).is_empty(), "file mode must not echo to stdout");
    let written = fs::read(&out_path).expect("output file exists");
    assert_eq!(written, on_stdout.stdout, "file bytes equal stdout bytes");
}

#[test]
fn identical_invocations_produce_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "box.case", BOX_CASE);
    let case = path.to_str().unwrap();
    let first = run(&["transform", case]);
    let second = run(&["transform", case]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

#[test]
fn classify_prints_a_verdict_per_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "box.case", BOX_CASE);
    let output = run(&["classify", path.to_str().unwrap(), "--space", "linf"]);
    assert_eq!(code(&output), 0, "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(
        text.starts_with("X: consistent with l_inf at horizon 100"),
        "got: {text}"
    );

    let csv = run(&["classify", path.to_str().unwrap(), "--space", "c0", "--format", "csv"]);
    assert_eq!(code(&csv), 0);
    let text = stdout(&csv);
    assert!(text.starts_with("seq,space,verdict,horizon,note\n"), "got: {text}");
    assert!(text.contains("X,c_0,"), "got: {text}");
}

#[test]
fn classify_rejects_an_unknown_space() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "box.case", BOX_CASE);
    let output = run(&["classify", path.to_str().unwrap(), "--space", "banach"]);
    assert_eq!(code(&output), 2);
    assert!(stderr(&output).contains("--space"), "got: {}", stderr(&output));
}

// ---------------------------------------------------------------------------
// theorems
// ---------------------------------------------------------------------------

#[test]
fn theorems_lists_the_catalog() {
    let output = run(&["theorems", "--list"]);
    assert_eq!(code(&output), 0);
    let listing = stdout(&output);
    let ids: Vec<&str> = listing.lines().collect();
    assert_eq!(ids.len(), 16);
    assert!(ids.contains(&"nonsymmetric"), "got: {ids:?}");
    assert!(ids.contains(&"modulus_power_equiv"), "got: {ids:?}");
}

#[test]
fn theorems_runs_a_filtered_case_and_reports_it() {
    let output = run(&["theorems", "--filter", "nonsymmetric"]);
    assert_eq!(code(&output), 0, "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("PASS nonsymmetric"), "got: {text}");
    assert!(text.contains("1 of 1 cases passed"), "got: {text}");
    assert!(stderr(&output).contains("ran 1 case(s)"), "timing goes to stderr");
}

#[test]
fn theorems_with_an_unmatched_filter_passes_vacuously() {
    let output = run(&["theorems", "--filter", "no_such_case"]);
    assert_eq!(code(&output), 0);
    assert!(stdout(&output).contains("0 of 0 cases passed"), "got: {}", stdout(&output));
}
