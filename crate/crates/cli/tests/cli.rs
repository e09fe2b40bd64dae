use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn morita(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morita"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn examples() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let o = morita(&["examples", "--write", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    dir
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

fn read_json(p: &PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn examples_are_all_valid() {
    let dir = examples();
    let mut names: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.len() >= 10);
    for name in names.iter().filter(|n| !n.starts_with("corrupted")) {
        let o = morita(&["validate", &path(dir.path(), name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
    }
}

#[test]
fn corrupted_bimodule_is_rejected_with_a_pointer() {
    let dir = examples();
    let o = morita(&["validate", &path(dir.path(), "corrupted_bimodule.json")]);
    assert_eq!(o.status.code(), Some(1));
    let msg = stdout(&o) + &stderr(&o);
    assert!(msg.contains("axiom (a)"), "{msg}");
    assert!(msg.contains("/basis"), "{msg}");
}

#[test]
fn induced_map_methods_agree_on_column_space() {
    let dir = examples();
    let o = morita(&["induced-map", &path(dir.path(), "cn.json"), "--method", "both"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("[[1]]"), "{out}");
    assert!(out.contains("agree"), "{out}");
}

#[test]
fn index_and_k0_outputs() {
    let dir = examples();
    let o = morita(&["index", &path(dir.path(), "zero_op.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(1)"), "{}", stdout(&o));

    let o = morita(&["k0", &path(dir.path(), "algebra_m2_m3.json")]);
    assert!(stdout(&o).contains("(2,3)"), "{}", stdout(&o));
    let o = morita(&["k0", &path(dir.path(), "projection.json")]);
    assert!(stdout(&o).contains("(1,3)"), "{}", stdout(&o));
    let o = morita(&["rank", &path(dir.path(), "module.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn json_format_is_machine_readable() {
    let dir = examples();
    let o = morita(&["--format", "json", "index", &path(dir.path(), "zero_op.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object(), "{v}");
}

#[test]
fn bimodule_constructions_write_valid_documents() {
    let dir = examples();
    let cn = path(dir.path(), "cn.json");
    let conj = dir.path().join("conj.json");
    let tensor = dir.path().join("tensor.json");
    let ext = dir.path().join("ext.json");
    let link = dir.path().join("link.json");
    let corner = dir.path().join("corner.json");

    assert!(morita(&["conjugate", &cn, "-o", conj.to_str().unwrap()]).status.success());
    let o = morita(&["tensor", &cn, conj.to_str().unwrap(), "-o", tensor.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(morita(&["etensor", &cn, &cn, "-o", ext.to_str().unwrap()]).status.success());
    assert!(morita(&["link", &cn, "-o", link.to_str().unwrap()]).status.success());
    let o = morita(&["corner", link.to_str().unwrap(), "--pa", "3", "-o", corner.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));

    for p in [&conj, &tensor, &ext, &link, &corner] {
        assert_eq!(read_json(p)["format_version"], 1);
        let o = morita(&["validate", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", p.display(), stderr(&o));
    }
    assert_eq!(read_json(&tensor)["kind"], "bimodule");
    assert_eq!(read_json(&link)["kind"], "linking-algebra");
    let o = morita(&["induced-map", corner.to_str().unwrap(), "--method", "both"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn generated_documents_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = morita(&["generate", "bimodule", "--seed", "5", "-o", p.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(morita(&["validate", a.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn short_verify_run_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = morita(&["verify", "--seed", "3", "--trials", "2", "-o", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let v = read_json(&report);
    assert_eq!(v["kind"], "report");
    assert_eq!(v["seed"], 3);
    assert!(v["properties"].as_array().unwrap().len() >= 12);
}

#[test]
fn verify_fails_on_corrupted_fixture() {
    let dir = examples();
    let o = morita(&[
        "verify",
        "--suite",
        "fredholm",
        "--trials",
        "1",
        "--fixture",
        &path(dir.path(), "corrupted_bimodule.json"),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(morita(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(morita(&["validate", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(morita(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(morita(&["generate", "nothing"]).status.code(), Some(2));
}

#[test]
fn malformed_json_is_a_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"kind":"algebra","format_version":1,"blocks":[0]}"#).unwrap();
    assert_eq!(morita(&["validate", p.to_str().unwrap()]).status.code(), Some(1));
}
