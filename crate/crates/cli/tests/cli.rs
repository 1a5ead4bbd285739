use std::path::Path;
use std::process::{Command, Output};

fn ratliff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratliff")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn analyze_writes_a_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "s.txt",
        "vars x y\nideal I = x^4, x^3*y, x*y^3, y^4\nideal J = x^4, y^4\noption reduction.I J\n",
    );
    let json = dir.path().join("r.json");
    let out = ratliff(&["analyze", &file, "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["schema"], "ratliff-report/1");
    let rec = &v["ideals"][0];
    assert_eq!(rec["name"], "I");
    assert_eq!(rec["rho"], 2);
    assert_eq!(rec["e"][3], "-1");
}

#[test]
fn markdown_flag() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "s.txt", "vars x y\nideal I = x^2, y^2\n");
    let out = ratliff(&["analyze", &file, "--markdown", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("## I"));
    assert!(text.contains("| ρ | 1 |"));
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "bad.txt", "vars x\nideal I = y\n");
    let out = ratliff(&["analyze", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2:"));
}

#[test]
fn non_primary_ideal_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "s.txt", "vars x y\nideal I = x^2, x*y\n");
    let out = ratliff(&["analyze", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("NotMPrimary"));
}

#[test]
fn missing_file_exits_with_two() {
    assert_eq!(ratliff(&["analyze", "/nonexistent/session"]).status.code(), Some(2));
}

#[test]
fn bounds_eval_prints_the_closed_form() {
    let out = ratliff(&["bounds-eval", "--rj", "3", "--e2", "2", "--e1j", "-1", "--e3", "-8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "THM_4_4 16");
    let out = ratliff(&["bounds-eval", "--rj", "1", "--e2", "1/2", "--e1j", "0", "--e3", "0"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "THM_4_4 -1/4");
}

#[test]
fn corpus_passes() {
    let out = ratliff(&["corpus"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains(" 0 failed"));
    assert!(!text.contains("FAIL"));
}
