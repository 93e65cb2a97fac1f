use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value as Json;

fn program(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "programs", name]
        .iter()
        .collect()
}

fn lifted(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lifted"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json_doc(out: &Output) -> Json {
    let text = stdout(out);
    let mut docs = serde_json::Deserializer::from_str(&text).into_iter::<Json>();
    let doc = docs.next().expect("one document").expect("valid JSON");
    assert!(docs.next().is_none(), "more than one document in {text:?}");
    doc
}

fn path_arg(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn run_factorial() {
    let out = lifted(&[
        "run",
        path_arg(&program("factorial.imp")),
        "--state",
        r#"{"n":5}"#,
        "--fuel",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), r#"{"n":0,"acc":120}"#);
}

#[test]
fn run_loop_reports_fuel() {
    let out = lifted(&["run", path_arg(&program("loop.imp")), "--fuel", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout(&out).trim(), "no result within fuel 1000");
}

#[test]
fn run_malformed_file() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.imp");
    std::fs::write(&bad, "x := 1;\nwhile x do skip done\n").unwrap();
    let out = lifted(&["run", path_arg(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("syntax error at line 2"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn run_faults_exit_one() {
    let out = lifted(&["run", "-e", "x := y + 1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = lifted(&[
        "run",
        path_arg(&program("power.imp")),
        "--state",
        r#"{"b":2,"e":-1}"#,
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = lifted(&["run", "-e", "skip", "--state", "[1]"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn run_json_mode_emits_one_document() {
    let out = lifted(&["run", "-e", "x := 2 * 3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_doc(&out);
    assert_eq!(doc["status"], "value");
    assert_eq!(doc["state"]["x"], 6);

    let out = lifted(&[
        "run",
        path_arg(&program("loop.imp")),
        "--fuel",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_doc(&out)["status"], "bottom");

    let out = lifted(&["run", "-e", "x := ", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_doc(&out)["status"], "error");
    assert!(!out.stderr.is_empty());
}

#[test]
fn trace_examples() {
    let fact = program("fact.json");
    let out = lifted(&["trace", path_arg(&fact), "--input", "2", "--fuel", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out).trim(),
        r#"{"input":2,"samples":[null,null,null,2,2,2],"stabilized_at":3}"#
    );

    let out = lifted(&["trace", path_arg(&fact), "--input", "-1", "--fuel", "5"]);
    let doc = json_doc(&out);
    assert!(doc["samples"].as_array().unwrap().iter().all(Json::is_null));
    assert_eq!(doc["stabilized_at"], Json::Null);

    let out = lifted(&["trace", "-e", r#"["lit",7]"#, "--input", "0", "--fuel", "1"]);
    assert_eq!(
        stdout(&out).trim(),
        r#"{"input":0,"samples":[null,7],"stabilized_at":1}"#
    );
}

#[test]
fn trace_rejects_bad_json() {
    let out = lifted(&["trace", "-e", r#"["lit"]"#, "--input", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = lifted(&[
        "trace",
        "-e",
        r#"["if",["lit",1],["lit",2],["lit",3]]"#,
        "--input",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fix_examples() {
    let fact = program("fact.json");
    let out = lifted(&["fix", path_arg(&fact), "--input", "5", "--fuel", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_doc(&out);
    assert_eq!(doc["result"], 120);
    assert_eq!(doc["witness"], 6);
    assert_eq!(doc["unbounded"]["result"], 120);

    let out = lifted(&[
        "fix",
        path_arg(&fact),
        "--input",
        "-3",
        "--fuel",
        "50",
        "--guard",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json_doc(&out);
    assert_eq!(doc["result"], Json::Null);
    assert_eq!(doc["witness"], Json::Null);
    assert!(doc["unbounded"]["error"].as_str().unwrap().contains("1000"));

    let out = lifted(&["fix", path_arg(&fact), "--input", "21"]);
    assert_eq!(out.status.code(), Some(1));
    let out = lifted(&["fix", path_arg(&fact), "--input", "1", "--guard", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(lifted(&["run"]).status.code(), Some(1));
    assert_eq!(lifted(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        lifted(&["check", "-e", "[\"input\"]", "--domain", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(lifted(&["--help"]).status.code(), Some(0));
}

#[test]
fn check_factorial_passes() {
    let fact = program("fact.json");
    let out = lifted(&[
        "check",
        path_arg(&fact),
        "--domain",
        "0,1,2",
        "--clip",
        "0..2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_doc(&out);
    assert_eq!(doc["verdict"], "pass");
    for key in ["monotone", "continuous", "iterates_chain", "tarski"] {
        assert_eq!(doc[key]["verdict"], "pass", "{key}");
    }

    let out = lifted(&[
        "check",
        path_arg(&fact),
        "--domain",
        "0,1,2",
        "--clip",
        "0..2",
        "--codomain",
        "1,2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_doc(&out)["space"]["size"], 27);
}

#[test]
fn check_flip_graph_fails() {
    let out = lifted(&["check", "--graph", path_arg(&program("flip_graph.json"))]);
    assert_eq!(out.status.code(), Some(3));
    let doc = json_doc(&out);
    assert_eq!(doc["verdict"], "fail");
    assert_eq!(doc["monotone"]["counterexample"]["kind"], "not_monotone");
    assert_eq!(
        doc["monotone"]["counterexample"]["lower"]["entries"]["0"],
        Json::Null
    );
}

#[test]
fn check_incomplete_graph() {
    let out = lifted(&[
        "check",
        "--graph",
        path_arg(&program("incomplete_graph.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("does not cover"), "{err}");
}

#[test]
fn check_identity_graph_passes() {
    let out = lifted(&[
        "check",
        "--graph",
        path_arg(&program("identity_graph.json")),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn check_image_outside_space() {
    let out = lifted(&[
        "check",
        "-e",
        r#"["lit",1]"#,
        "--domain",
        "0",
        "--clip",
        "0..1",
        "--codomain",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}
