//! End-to-end checks of the binary: exit codes, output contracts, determinism.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scalefree"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("scalefree-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn sieve_prints_exact_count() {
    let out = run(&["sieve", "--limit", "100"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "pi(100) = 25");
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(&["sieve", "--limit", "100", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_error_names_the_precondition() {
    let out = run(&["sieve", "--limit", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("out of supported range"), "stderr: {err}");
}

#[test]
fn scan_writes_csv_with_exact_header() {
    let path = tmp_path("scan.csv");
    let out = run(&[
        "pnt-scan",
        "--x-min",
        "1e3",
        "--x-max",
        "1e4",
        "--points",
        "30",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let content = fs::read_to_string(&path).unwrap();
    let mut lines = content.lines();
    assert_eq!(lines.next(), Some("x,pi,eps,relerr,li,li_err"));
    assert_eq!(lines.count(), 30);
    fs::remove_file(&path).ok();
}

#[test]
fn identical_invocations_are_byte_identical() {
    let a = tmp_path("det-a.csv");
    let b = tmp_path("det-b.csv");
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let out = run(&[
            "pnt-scan",
            "--x-min",
            "1e3",
            "--x-max",
            "1e5",
            "--points",
            "20",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    fs::remove_file(&a).ok();
    fs::remove_file(&b).ok();
}

#[test]
fn no_partial_file_on_error() {
    let path = tmp_path("partial.csv");
    let out = run(&[
        "pnt-scan",
        "--x-min",
        "1e4",
        "--x-max",
        "1e3", // inverted window: domain error
        "--points",
        "10",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!path.exists());
}

#[test]
fn fit_emits_contract_json() {
    let out = run(&["fit", "--x-min", "1e3", "--x-max", "1e5", "--points", "20"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    for key in ["exponent", "intercept", "r2", "x_min", "x_max"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert!(json["exponent"].as_f64().unwrap() < 0.0);
}

#[test]
fn ode_writes_trace_and_summary() {
    let path = tmp_path("trace.csv");
    let out = run(&[
        "ode",
        "--eta",
        "0.1",
        "--levels",
        "8",
        "--trace",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("final product = 0.9"), "{text}");
    assert!(text.contains("parity deviation"));
    let trace = fs::read_to_string(&path).unwrap();
    assert!(trace.starts_with("level,eta,t_plus,partial_product\n"));
    assert_eq!(trace.lines().count(), 10);
    fs::remove_file(&path).ok();
}

#[test]
fn ode_pads_short_rescaling_lists() {
    let out = run(&[
        "ode", "--eta", "0.1", "--levels", "16", "--alpha", "1.05", "--eps", "0.002",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("constant C    = 0.998003992016"), "{text}");
    assert!(text.contains("order-2 jump"), "{text}");
}

#[test]
fn golden_and_ladder_run() {
    let out = run(&["golden", "--iters", "40"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0.618033988"));

    let out = run(&["ladder", "--x-max", "100"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("= 25"));
    assert!(stdout(&out).contains("consistent: true"));
}

#[test]
fn padic_and_norm_report_values() {
    let out = run(&["padic", "--prime", "3", "--digits", "0,1,2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("r = 1"), "{text}");
    assert!(text.contains("|x|_3 = 1/3"), "{text}");

    let out = run(&["norm", "0.001", "--delta", "0.01", "--cap", "100"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        r#"{"regime":"infinitesimal","value":0.5,"delta":0.01}"#
    );
}

#[test]
fn tree_exports_dot_and_json() {
    let out = run(&[
        "tree",
        "--prime",
        "2",
        "--digits",
        "1,0,0",
        "--digits",
        "1,1,0",
        "--digits",
        "1,0,1",
    ]);
    assert!(out.status.success());
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph ultrametric_tree {"));
    assert!(dot.contains("2^-2"));

    let out = run(&[
        "tree",
        "--prime",
        "2",
        "--digits",
        "1,0,0",
        "--digits",
        "1,1,0",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(json.get("prefix").is_some());
    assert!(json.get("radius_exp").is_some());
    assert!(json.get("children").is_some());
}

#[test]
fn report_emits_verdict() {
    let path = tmp_path("report.json");
    let out = run(&[
        "report",
        "--x-min",
        "1e3",
        "--x-max",
        "1e5",
        "--points",
        "17",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let verdict = &json["verdict"];
    assert!(verdict["measured_exponent"].as_f64().unwrap() < 0.0);
    assert!((verdict["claimed_exponent"].as_f64().unwrap() + 0.618034).abs() < 1e-5);
    assert!(verdict["gap"].as_f64().unwrap() > 0.3);
    assert_eq!(verdict["power_law_reproduced"], serde_json::json!(false));
    fs::remove_file(&path).ok();
}
