//! End-to-end runs of the binary. Golden outputs live in `tests/golden`;
//! set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stabreduce"));
    cmd.args(args).current_dir(root()).env_remove("STABREDUCE_DEGREE_BOUND");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn diagnostic(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is one JSON object")
}

fn golden(name: &str, actual: &str) {
    let path = root().join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

#[test]
fn reduce_opposite_weights_matches_golden() {
    let out = run(&["reduce", "examples/a2_weights_1_-1.json"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    golden("a2_weights_1_-1.trace.json", &text);
    let trace: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(trace["classification"], "tame");
    assert_eq!(trace["steps"].as_array().unwrap().len(), 1);
    assert_eq!(trace["steps"][0]["barycenters"], serde_json::json!([[1, 1]]));
    assert_eq!(trace["steps"][0]["gms_check"]["ok"]["verdict"]["status"], "verified");
    assert!(trace["verification"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn analyze_matches_golden() {
    for (file, name) in [
        ("examples/a2_weights_1_0.json", "a2_weights_1_0.analysis.json"),
        ("examples/ex_false.json", "ex_false.analysis.json"),
        ("examples/vargit.json", "vargit.analysis.json"),
    ] {
        let out = run(&["analyze", file], &[]);
        assert_eq!(out.status.code(), Some(0), "{file}");
        golden(name, &stdout(&out));
    }
}

#[test]
fn unstable_stack_is_classified_and_rejected() {
    let out = run(&["analyze", "examples/a2_weights_1_0.json"], &[]);
    let a: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(a["classification"], "not_stable");
    assert_eq!(a["max_stabilizer_dim"], 1);
    let out = run(&["reduce", "examples/a2_weights_1_0.json"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(diagnostic(&out)["error"], "not_stable");
}

#[test]
fn every_shipped_example_analyzes() {
    let dir = root().join("examples");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(files.len() >= 8);
    for f in files {
        let out = run(&["analyze", f.to_str().unwrap()], &[]);
        assert_eq!(out.status.code(), Some(0), "{}: {}", f.display(), String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn stable_examples_reduce_and_verify() {
    for file in ["a2_weights_1_-1.json", "a3_weights_1_1_-1.json", "mu2_plane.json", "monomial_union.json"] {
        let out = run(&["reduce", &format!("examples/{file}")], &[]);
        assert_eq!(out.status.code(), Some(0), "{file}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn divisor_flag_is_recorded() {
    let out = run(&["reduce", "examples/a2_weights_1_-1.json", "--divisor", "1:0,0:1"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let trace: Value = serde_json::from_slice(&out.stdout).unwrap();
    let mut initial = trace["initial_exceptional"].as_array().unwrap().clone();
    initial.sort_by_key(|r| r.to_string());
    assert_eq!(initial, [serde_json::json!([0, 1]), serde_json::json!([1, 0])]);
    // the coordinate rays leave the fan with the deleted orbits
    assert_eq!(trace["exceptional"], serde_json::json!([[1, 1]]));

    let out = run(&["reduce", "examples/a2_weights_1_-1.json", "--divisor", "1:y"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(diagnostic(&out)["error"], "parse");
}

#[test]
fn export_formats() {
    let out = run(&["export", "examples/monomial_union.json", "--format", "dot"], &[]);
    assert_eq!(out.status.code(), Some(0));
    golden("monomial_union.dot", &stdout(&out));

    // the JSON export reads back as the same stack
    let out = run(&["export", "examples/a3_weights_1_1_-1.json"], &[]);
    let exported = stabreduce::model::parse_document(&stdout(&out)).unwrap();
    let original =
        stabreduce::model::parse_document(&std::fs::read_to_string(root().join("examples/a3_weights_1_1_-1.json")).unwrap()).unwrap();
    assert_eq!(exported.stack().unwrap(), original.stack().unwrap());
}

#[test]
fn verify_paper_passes() {
    let out = run(&["verify-paper"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    assert!(!text.contains("FAIL"));
}

#[test]
fn errors_are_json_with_exit_code_one() {
    type Case<'a> = (&'a [&'a str], &'a [(&'a str, &'a str)], &'a str);
    let cases: [Case; 4] = [
        (&["analyze", "examples/does_not_exist.json"], &[], "invalid"),
        (&["reduce", "examples/vargit.json"], &[], "unsupported"),
        (&["analyze", "examples/ex_false.json"], &[("STABREDUCE_DEGREE_BOUND", "many")], "invalid"),
        (&["analyze", "Cargo.toml"], &[], "parse"),
    ];
    for (args, env, kind) in cases {
        let out = run(args, env);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let d = diagnostic(&out);
        assert_eq!(d["error"], kind, "{args:?}");
        assert!(d["message"].as_str().is_some_and(|m| !m.is_empty()));
    }
    let out = run(&["frobnicate"], &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn degree_bound_override_reaches_the_analysis() {
    // the stabilization search needs a bound of at least 2·max|weight| + 1 = 7
    let out = run(&["analyze", "examples/ex_false.json"], &[("STABREDUCE_DEGREE_BOUND", "3")]);
    assert_eq!(out.status.code(), Some(0));
    let a: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(a["saturated_blowup_exceptional"]["error"].is_string(), "{a}");
    let out = run(&["analyze", "examples/ex_false.json"], &[("STABREDUCE_DEGREE_BOUND", "7")]);
    let a: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(a["saturated_blowup_exceptional"]["ok"]["text"], "V(x3) ∖ (V(x1) ∪ V(x2))");
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verify-paper"));
}
