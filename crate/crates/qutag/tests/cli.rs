//! Black-box tests of the qutag binary: round trips, output formats,
//! and the exit-code contract.

use std::path::Path;
use std::process::{Command, Output};

fn qutag<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_qutag"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn gen_singer(path: &Path) {
    let out = qutag([
        "tag",
        "gen",
        "--family",
        "singer",
        "--q",
        "2",
        "--m",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
}

#[test]
fn gen_analyze_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("singer.jsonl");
    gen_singer(&file);

    let out = qutag(["tag", "analyze", "--input", file.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("family=singer v=7 k=3"), "{text}");
    assert!(text.contains("rho=4 bound=4 optimal=true threshold=1"), "{text}");
    assert!(text.contains("mu=1 delta=2"), "{text}");

    let out = qutag(["verify", "--input", file.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("ok: record 0"), "{}", stdout_of(&out));
}

#[test]
fn analyze_reports_optimality_of_an_external_tag() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("ext.jsonl");
    let out = qutag([
        "tag",
        "gen",
        "--family",
        "external",
        "--v",
        "27",
        "--support",
        "0,3,11,21,26",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));

    let out = qutag(["tag", "analyze", "--input", file.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("rho=8 bound=8 optimal=true threshold=3"), "{text}");
}

#[test]
fn tampered_rho_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("singer.jsonl");
    gen_singer(&file);

    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.contains("\"rho\":4"));
    std::fs::write(&file, text.replace("\"rho\":4", "\"rho\":6")).unwrap();

    let out = qutag(["verify", "--input", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr_of(&out).contains("error[verification]"), "{}", stderr_of(&out));
}

#[test]
fn malformed_record_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.jsonl");
    std::fs::write(&file, "not json at all\n").unwrap();

    let out = qutag(["verify", "--input", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(6));
    assert!(stderr_of(&out).contains("error[malformed_file]"), "{}", stderr_of(&out));
}

#[test]
fn missing_seed_is_a_usage_error() {
    let out = qutag(["sim", "naive", "--v", "11"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unreachable_code_size_is_infeasible() {
    let out = qutag(["ooc", "search", "--v", "9", "--k", "3", "--size", "2"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stderr_of(&out).contains("error[infeasible]"), "{}", stderr_of(&out));
}

#[test]
fn missing_input_file_is_an_io_error() {
    let out = qutag(["tag", "analyze", "--input", "/nonexistent/tags.jsonl"]);
    assert_eq!(out.status.code(), Some(7));
    assert!(stderr_of(&out).contains("error[io]"), "{}", stderr_of(&out));
}

#[test]
fn search_reports_are_valid_json() {
    let out = qutag(["tag", "search", "--v", "7", "--k", "3"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["objective"], 4);
    assert_eq!(report["witnesses"][0], serde_json::json!([0, 1, 3]));
    assert_eq!(report["bound_met"], true);
    assert_eq!(report["exhaustive"], true);

    let out = qutag(["header", "search", "--v", "7", "--k", "3"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["objective"], 1);
    assert_eq!(report["witnesses"][0], serde_json::json!([0, 1, 3]));
}
