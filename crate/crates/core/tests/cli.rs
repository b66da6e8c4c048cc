use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn framekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_framekit"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("FRAMEKIT_MAX_DIM")
        .output()
        .expect("spawn framekit")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn weighted_example_reconciles() {
    let out = framekit(&["analyze", "fixtures/ex_weighted.json", "--sizes", "4,8,16"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let r = &v["classification"]["report"];
    assert_eq!(num(&r["lower_frame_bound"]), 4.0);
    assert_eq!(r["bessel_bound"], "inf");
    assert_eq!(num(&r["riesz_fischer_bound"]), 4.0);
    assert_eq!(v["profile"]["frame_operator_closable_on_h"], false);
    let statuses: Vec<&str> = v["reconciliation"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["status"].as_str().unwrap())
        .collect();
    assert!(statuses.iter().all(|&s| s == "agree"), "{statuses:?}");
}

#[test]
fn round_robin_restricted_bounds() {
    let out = framekit(&["study", "fixtures/round_robin.json", "--sizes", "4,8,16"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    for s in v["study"]["samples"].as_array().unwrap() {
        assert!((num(&s["restricted_A"]) - 1.0).abs() < 1e-9, "{s}");
        assert!((num(&s["restricted_B"]) - 1.0).abs() < 1e-9, "{s}");
    }
}

#[test]
fn all_repeats_has_trivial_domain() {
    let out = framekit(&["analyze", "fixtures/all_repeats.json", "--sizes", "4,8,16"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["profile"]["hil_psi_is_zero"], true);
}

#[test]
fn anchored_family_is_empirical_only() {
    let out = framekit(&["analyze", "fixtures/anchored.json", "--sizes", "4,8,16,32"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["classification"]["status"], "unresolved");
    let reason = v["classification"]["reason"].as_str().unwrap();
    assert!(reason.contains("analytic: unresolved"), "{reason}");
    let a: Vec<f64> = v["study"]["samples"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| num(&s["A"]))
        .collect();
    assert!(a.windows(2).all(|w| w[1] < w[0]), "A(N) should shrink: {a:?}");
    assert!(a[3] < 0.2, "{a:?}");
}

#[test]
fn two_vector_duals() {
    let out = framekit(&["dual", "fixtures/two_vec.json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let duals = v["dual"]["duals"].as_array().unwrap();
    let re = |i: usize, k: usize| num(&duals[i][k][0]);
    assert!((re(0, 0) - 1.0).abs() < 1e-12 && (re(0, 1) + 1.0).abs() < 1e-12);
    assert!(re(1, 0).abs() < 1e-12 && (re(1, 1) - 1.0).abs() < 1e-12);
}

#[test]
fn classify_orthonormal_basis() {
    let out = framekit(&["classify", "fixtures/onb3.json"]);
    assert_eq!(code(&out), 0);
    let c = &json(&out)["classification"];
    assert_eq!(c["is_riesz_basis"], true);
    assert_eq!(num(&c["bessel_bound"]), 1.0);
    assert_eq!(num(&c["lower_frame_bound"]), 1.0);
}

#[test]
fn dependent_family_fails_biorthogonal_requirement() {
    let out = framekit(&["dual", "fixtures/dependent.json", "--require-biorthogonal"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not minimal"));
    // without the flag the dual is still computed
    assert_eq!(code(&framekit(&["dual", "fixtures/dependent.json"])), 0);
}

#[test]
fn coarse_tolerance_reports_mismatch() {
    let out = framekit(&[
        "analyze",
        "fixtures/ex_weighted.json",
        "--sizes",
        "4,8,16",
        "--tol",
        "0.9",
    ]);
    assert_eq!(code(&out), 3);
    // the report is still written
    assert!(json(&out)["reconciliation"]["mismatches"].as_u64().unwrap() > 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&framekit(&["analyze", "fixtures/nope.json"])), 2);
    assert_eq!(code(&framekit(&["study", "fixtures/onb3.json"])), 2);
    assert_eq!(code(&framekit(&["classify", "fixtures/onb3.json", "--tol", "-1"])), 2);
    assert_eq!(code(&framekit(&["frobnicate"])), 2);
    assert_eq!(
        code(&framekit(&["analyze", "fixtures/onb3.json", "--format", "csv"])),
        2
    );
    assert_eq!(
        code(&framekit(&["study", "fixtures/ex_weighted.json", "--sizes", "8,4"])),
        2
    );
}

#[test]
fn malformed_spec_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{ \"kind\": \"explicit\", \"space_dim\": 2, \"elements\": [[1, 0], [0]] }").unwrap();
    let out = framekit(&["classify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn max_dim_env_limits_truncation() {
    let out = Command::new(env!("CARGO_BIN_EXE_framekit"))
        .args(["study", "fixtures/ex_weighted.json", "--sizes", "4,64"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env("FRAMEKIT_MAX_DIM", "16")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn out_flag_writes_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("series.csv");
    let args = ["study", "fixtures/round_robin.json", "--sizes", "4,8,16", "--format", "csv"];
    let stdout = framekit(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", target.to_str().unwrap()]);
    let out = framekit(&with_out);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read(&target).unwrap(), stdout);
    let text = String::from_utf8(stdout).unwrap();
    assert!(text.lines().next().unwrap().starts_with("N,"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn report_is_text() {
    let out = framekit(&["report", "fixtures/ex_weighted.json", "--sizes", "4,8,16"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(serde_json::from_str::<Value>(&text).is_err());
    assert!(text.contains("reconciliation"));
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        &["classify", "fixtures/dependent.json"][..],
        &["analyze", "fixtures/round_robin.json", "--sizes", "4,8"][..],
    ] {
        assert_eq!(framekit(args).stdout, framekit(args).stdout, "{args:?}");
    }
    assert!(Path::new(env!("CARGO_BIN_EXE_framekit")).exists());
}
