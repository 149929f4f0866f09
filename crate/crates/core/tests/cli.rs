use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matdecomp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn matdecomp")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("matdecomp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn catalog_b4_json() {
    let out = run(&["catalog", "--label", "B4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["schema"], "matdecomp/1");
    assert_eq!(v["M"], "M5a");
    assert_eq!(v["label"], "B4");
    assert_eq!(v["S"].as_array().unwrap().len(), 4);
}

#[test]
fn catalog_text_lists_twelve() {
    let out = run(&["catalog"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 12);
}

#[test]
fn verify_catalog_and_unital_input() {
    let good = run(&["catalog", "--label", "A3", "--json"]);
    let f = temp_file("a3.json", std::str::from_utf8(&good.stdout).unwrap());
    let out = run(&["verify", path_str(&f)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["valid"], true);

    let unital = json!({
        "schema": "matdecomp/1",
        "field": {"kind": "rational"},
        "S": [
            [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
            [["0", "0", "0"], ["1", "0", "0"], ["0", "0", "0"]],
            [["0", "0", "0"], ["0", "0", "0"], ["1", "0", "0"]]
        ],
        "M": "M6"
    });
    let f = temp_file("unital.json", &unital.to_string());
    let out = run(&["verify", path_str(&f)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("UnitalS"));
}

#[test]
fn verify_rejects_unknown_keys() {
    let mut v: Value = serde_json::from_slice(&run(&["catalog", "--label", "A1", "--json"]).stdout).unwrap();
    v["extra"] = json!(1);
    let f = temp_file("extra.json", &v.to_string());
    let out = run(&["verify", path_str(&f)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn scramble_then_canonicalize() {
    let out = run(&["scramble", "--label", "A2", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let f = temp_file("scrambled-a2.json", std::str::from_utf8(&out.stdout).unwrap());
    let out = run(&["canonicalize", path_str(&f)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["label"], "A2");
}

#[test]
fn canonicalize_without_extension() {
    // span{e21, e31, e32 + 2 e23, e22 + e33}: the reduction needs sqrt(2)
    let doc = json!({
        "schema": "matdecomp/1",
        "field": {"kind": "rational"},
        "S": [
            [["0", "0", "0"], ["1", "0", "0"], ["0", "0", "0"]],
            [["0", "0", "0"], ["0", "0", "0"], ["1", "0", "0"]],
            [["0", "0", "0"], ["0", "0", "2"], ["0", "1", "0"]],
            [["0", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
        ],
        "M": "M5a"
    });
    let f = temp_file("needs-root.json", &doc.to_string());
    let out = run(&["canonicalize", path_str(&f)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["label"], "B4");
    assert_eq!(v["extension"], "2");
    let out = run(&["canonicalize", path_str(&f), "--no-extend"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fingerprint_by_label_and_file() {
    let by_label = stdout_json(&run(&["fingerprint", "--label", "B5"]));
    assert_eq!(by_label["unit_on_rad_sq"], true);
    let out = run(&["scramble", "--label", "B5", "--seed", "4"]);
    let f = temp_file("b5.json", std::str::from_utf8(&out.stdout).unwrap());
    let by_file = stdout_json(&run(&["fingerprint", path_str(&f)]));
    for key in [
        "dim",
        "rad_dim",
        "rad_sq_dim",
        "ss_dim",
        "center_dim",
        "idem_trace_set",
        "unit_on_rad_sq",
    ] {
        assert_eq!(by_label[key], by_file[key], "{key}");
    }
}

#[test]
fn separate_exits_zero() {
    let out = run(&["separate", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["comparisons"].as_array().unwrap().len(), 19);
}

#[test]
fn rb_single_and_all() {
    let out = run(&["rb", "--label", "B7", "--weight", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["weight"], "5");
    let out = run(&["rb", "--all", "--weight", "-1/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["operators"].as_array().unwrap().len(), 12);
    let out = run(&["rb", "--label", "A1", "--weight", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn search_report() {
    let out = run(&["search", "--dims", "63", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["clean"], true);
    assert_eq!(v["valid_decompositions"], 52);
    let out = run(&["search", "--dims", "63", "--p", "2", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["search", "--dims", "54", "--p", "3", "--m", "M5b", "--table"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("B9"));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["catalog", "--label", "C1"]).status.code(), Some(2));
    assert_eq!(run(&["search", "--dims", "54", "--p", "5"]).status.code(), Some(2));
    assert_eq!(
        run(&["search", "--dims", "63", "--p", "5", "--m", "M5a"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn missing_file() {
    assert_eq!(run(&["verify", "/nonexistent/matdecomp.json"]).status.code(), Some(1));
}

#[test]
fn selftest_subset() {
    let out = run(&["selftest", "--only", "1", "--only", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 2);
}
