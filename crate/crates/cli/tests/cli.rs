//! End-to-end tests of the binary: exit-code contract, report determinism
//! across thread counts, and the canned reproductions.

use std::io::Write;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_iwafitt")
}

fn write_config(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

const BASE_R2: &str = r#"{
  "p": 3, "coeff_precision": 2, "t_precision": 6,
  "group_orders": [3, 3],
  "places": [
    {"label": "v1", "inertia_generators": [[1, 0]], "frobenius": {"group_element": [], "n_v": 0}},
    {"label": "v2", "inertia_generators": [[0, 1]], "frobenius": {"group_element": [], "n_v": 0}}
  ],
  "tasks": [
    {"kind": "fitt1", "methods": ["direct", "tensor"]},
    {"kind": "reproduce", "id": "ex-4.5"},
    {"kind": "exactness", "target": "pruned"}
  ]
}"#;

#[test]
fn passes_with_exit_zero() {
    let f = write_config(BASE_R2);
    let out = Command::new(bin())
        .args(["run", f.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("status=PASS"));
    assert!(text.contains("summary: 3 passed, 0 failed, 0 errors"));
}

#[test]
fn deterministic_across_jobs() {
    let f = write_config(BASE_R2);
    let run = |jobs: &str| {
        let out = Command::new(bin())
            .args(["run", f.path().to_str().unwrap(), "--jobs", jobs])
            .output()
            .unwrap();
        String::from_utf8(out.stdout).unwrap()
    };
    let a = run("1");
    let b = run("4");
    assert_eq!(a, b, "text reports differ across --jobs");
    // and across repeat runs
    let c = run("4");
    assert_eq!(b, c);
}

#[test]
fn malformed_config_exits_two_with_location() {
    let f = write_config("{ this is not json ");
    let out = Command::new(bin())
        .args(["run", f.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line"), "diagnostics should carry a location: {err}");
}

#[test]
fn missing_file_exits_two() {
    let out = Command::new(bin())
        .args(["run", "/nonexistent/config.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_task_exits_one() {
    // a cyclic complex has homology in degree 0; disallowing it forces FAIL
    let cfg = r#"{
      "p": 3, "coeff_precision": 2, "t_precision": 4,
      "group_orders": [9],
      "tasks": [{"kind": "exactness", "target": "cyclic", "allowed": []}]
    }"#;
    let f = write_config(cfg);
    let out = Command::new(bin())
        .args(["run", f.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{:?}", out);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("status=FAIL"));
}

#[test]
fn erroring_task_exits_three() {
    let cfg = r#"{
      "p": 3, "coeff_precision": 2, "t_precision": 4,
      "group_orders": [3],
      "tasks": [{"kind": "reproduce", "id": "no-such-example"}]
    }"#;
    let f = write_config(cfg);
    let out = Command::new(bin())
        .args(["run", f.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("status=ERROR"));
}

#[test]
fn reproduce_s2_reports_vanishing_minors() {
    let cfg = r#"{
      "p": 3, "coeff_precision": 2, "t_precision": 4,
      "group_orders": [3],
      "tasks": [{"kind": "reproduce", "id": "s2-5minors"}]
    }"#;
    let f = write_config(cfg);
    let out = Command::new(bin())
        .args(["run", f.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("all 21 5-minors vanish: PASS"),
        "unexpected report: {text}"
    );
}

#[test]
fn json_report_is_written() {
    let f = write_config(BASE_R2);
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("report.json");
    let out = Command::new(bin())
        .args([
            "run",
            f.path().to_str().unwrap(),
            "--json",
            json_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(value["tasks"].as_array().unwrap().len(), 3);
    assert_eq!(value["tasks"][0]["status"], "PASS");
    assert!(value["tasks"][0]["precision"]["N"].is_number());
    assert!(value["tasks"][0]["millis"].is_number());
}

#[test]
fn flag_overrides_config() {
    // widen the group via --group and verify the echo reflects it
    let cfg = r#"{
      "p": 3, "coeff_precision": 2, "t_precision": 4,
      "group_orders": [3],
      "tasks": [{"kind": "exactness", "target": "cyclic"}]
    }"#;
    let f = write_config(cfg);
    let out = Command::new(bin())
        .args(["run", f.path().to_str().unwrap(), "--group", "9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("group=[9]"));
}
