//! End-to-end CLI behavior: exit codes, pipelines, and report shapes.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_penny-torus"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().expect("binary finishes")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

#[test]
fn emit_verify_round_trip_succeeds() {
    let emitted = run(&["catalog", "emit", "k5"]);
    assert!(emitted.status.success());
    let verified = run_with_stdin(
        &["verify", "--expect", "k5", "--exact"],
        &String::from_utf8_lossy(&emitted.stdout),
    );
    assert_eq!(verified.status.code(), Some(0));
    let report = stdout_json(&verified);
    assert_eq!(report["pass"], true);
    assert_eq!(report["diameter_squared_exact"], "1/5");
}

#[test]
fn verification_failure_exits_one_with_parseable_report() {
    let emitted = run(&["catalog", "emit", "k5"]);
    let verified = run_with_stdin(
        &["verify", "--expect", "k33", "--exact"],
        &String::from_utf8_lossy(&emitted.stdout),
    );
    assert_eq!(verified.status.code(), Some(1));
    let report = stdout_json(&verified);
    assert_eq!(report["pass"], false);
    assert_eq!(report["failure"]["kind"], "vertex-count-mismatch");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "--n", "0"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "/nonexistent.json", "--expect", "k5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["catalog", "emit", "dodecahedron"]).status.code(),
        Some(2)
    );
    let not_exact = r#"{"torus":"unit-square-centered","exact":false,"points":[[0.0,0.0],[0.25,0.25]]}"#;
    assert_eq!(
        run_with_stdin(&["verify", "--expect", "path(2)", "--exact"], not_exact)
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn coincident_points_are_a_numerical_failure() {
    let degenerate =
        r#"{"torus":"unit-square-centered","exact":false,"points":[[0.1,0.1],[0.1,0.1]]}"#;
    let output = run_with_stdin(&["analyze"], degenerate);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn bound_reports_the_edge_bound() {
    let output = run(&["bound", "--n", "11"]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout_json(&output)["bound"], 21);
}

#[test]
fn planar_reports_witness_for_k5() {
    let k5 = r#"{"n":5,"edges":[[0,1],[0,2],[0,3],[0,4],[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]]}"#;
    let output = run_with_stdin(&["planar"], k5);
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_eq!(report["planar"], false);
    assert!(report["witness"].is_object());
    let no_witness = run_with_stdin(&["planar", "--no-witness"], k5);
    assert!(stdout_json(&no_witness)["witness"].is_null());
}

#[test]
fn analyze_octahedron_catalog_entry() {
    let emitted = run(&["catalog", "emit", "octahedron"]);
    let output = run_with_stdin(&["analyze"], &String::from_utf8_lossy(&emitted.stdout));
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_eq!(report["named_match"], "octahedron");
    assert_eq!(report["planar"], true);
    assert_eq!(report["regular"], 4);
}

#[test]
fn render_writes_svg_and_reports_counts() {
    let dir = std::env::temp_dir().join("penny_torus_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("k33_k3.svg");
    let emitted = run(&["catalog", "emit", "k33"]);
    let config_path = dir.join("k33.json");
    std::fs::write(&config_path, &emitted.stdout).unwrap();
    let output = run(&[
        "render",
        "--input",
        config_path.to_str().unwrap(),
        "--tiling",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_eq!(report["circles"], 54);
    assert_eq!(report["edges"], 9);
    let svg = std::fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches("<circle").count(), 54);
}

#[test]
fn randomized_commands_default_to_seed_zero() {
    let explicit = run(&["optimize", "--n", "4", "--restarts", "3", "--seed", "0"]);
    let implicit = run(&["optimize", "--n", "4", "--restarts", "3"]);
    assert_eq!(explicit.status.code(), Some(0));
    assert_eq!(explicit.stdout, implicit.stdout);
}

#[test]
fn verify_numeric_mode_with_tolerance() {
    let emitted = run(&["catalog", "emit", "octahedron"]);
    let verified = run_with_stdin(
        &["verify", "--expect", "octahedron", "--tol", "1e-9"],
        &String::from_utf8_lossy(&emitted.stdout),
    );
    assert_eq!(verified.status.code(), Some(0));
    let report = stdout_json(&verified);
    assert_eq!(report["pass"], true);
    assert_eq!(report["exact"], false);
    assert!(report["diameter_squared_exact"].is_null());
}

#[test]
fn render_k6_drawing_by_index() {
    let dir = std::env::temp_dir().join("penny_torus_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("k6.svg");
    let output = run(&["render", "--drawing", "k6:3", "--out", out.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_eq!(report["circles"], 6);
    assert_eq!(report["edges"], 15);
    assert_eq!(
        run(&["render", "--drawing", "k6:9", "--out", out.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
