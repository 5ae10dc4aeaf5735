use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn ultrafine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ultrafine")).args(args).output().unwrap()
}

fn json_out(args: &[&str]) -> Value {
    let out = ultrafine(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_tmp(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn check_catalog_algebras() {
    let h = json_out(&["check", "catalog:heisenberg3"]);
    assert_eq!(h["classification"], "nilpotent");
    assert_eq!(h["flag"]["basis"], json!(["Z", "Y", "X"]));
    assert!(h["roots"].as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap()).all(|c| c == "0"));

    let a = json_out(&["check", "catalog:axb"]);
    assert_eq!(a["classification"], "completely solvable");
    // roots in flag coordinates (Y, A): λ_1(A) = 1
    assert_eq!(a["roots"], json!([["0", "1"], ["0", "0"]]));

    let n = json_out(&["check", "catalog:noflag"]);
    assert_eq!(n["classification"], "flag not found");
    assert!(n["flag"].is_null());
}

#[test]
fn layer_examples() {
    assert_eq!(
        json_out(&["layer", "catalog:heisenberg3", "1,0,0"]),
        json!({"k": [1, 2, 1], "e": [2, 3], "jmap": {"1": 3}, "b": []})
    );
    assert_eq!(
        json_out(&["layer", "catalog:heisenberg3", "0,0,1"]),
        json!({"k": [1, 2, 3], "e": [], "jmap": {}, "b": []})
    );
    assert_eq!(
        json_out(&["layer", "catalog:axb", "1,0"]),
        json!({"k": [1, 0], "e": [1, 2], "jmap": {"1": 2}, "b": [1]})
    );
    // Z* in the defining basis (X, Y, Z)
    assert_eq!(
        json_out(&["layer", "catalog:heisenberg3", "0,0,-1/2", "--defining-basis"]),
        json!({"k": [1, 2, 1], "e": [2, 3], "jmap": {"1": 3}, "b": []})
    );
}

#[test]
fn polarize_and_orbit_rep() {
    let p = json_out(&["polarize", "catalog:heisenberg3", "1,0,0"]);
    assert_eq!(p["trace"]["d"], 1);
    assert_eq!(p["trace"]["i"], json!([2]));
    assert_eq!(p["trace"]["j"], json!([3]));
    assert_eq!(p["polarization"]["basis"], json!([["1", "0", "0"], ["0", "1", "0"]]));
    assert_eq!(p["check"]["is_isotropic"], true);
    assert_eq!(p["pukanszky"]["exact"], true);

    let o = json_out(&["orbit-rep", "catalog:heisenberg3", "1,3,-2"]);
    assert_eq!(o["representative"], json!(["1", "0", "0"]));
    assert_eq!(o["word"], json!([{"generator": 3, "t": "3"}, {"generator": 2, "t": "2"}]));
}

#[test]
fn error_exit_codes() {
    assert_eq!(ultrafine(&[]).status.code(), Some(1));
    assert_eq!(ultrafine(&["layer", "catalog:heisenberg3"]).status.code(), Some(1));
    assert_eq!(ultrafine(&["--help"]).status.code(), Some(0));
    assert_eq!(ultrafine(&["layer", "catalog:heisenberg3", "1,0"]).status.code(), Some(2));
    assert_eq!(ultrafine(&["layer", "catalog:heisenberg3", "1,x,0"]).status.code(), Some(2));
    assert_eq!(ultrafine(&["layer", "catalog:noflag", "1,0,0"]).status.code(), Some(2));
    assert_eq!(ultrafine(&["orbit-rep", "catalog:axb", "1,0"]).status.code(), Some(2));
    assert_eq!(ultrafine(&["check", "catalog:unknown"]).status.code(), Some(2));

    let bad = write_tmp(
        "jacobi.json",
        r#"{"name": "bad", "dim": 3, "basis": ["X", "Y", "Z"], "brackets": [
            {"i": "X", "j": "Y", "coeffs": [0, 0, 1]},
            {"i": "X", "j": "Z", "coeffs": [1, 0, 0]}]}"#,
    );
    let out = ultrafine(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(1, 2, 3)"));

    let syntax = write_tmp("syntax.json", "{\"name\": \"x\",\n\"dim\": 3,\n\"basis\": [\"X\" \"Y\"]}");
    let out = ultrafine(&["check", syntax.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let not_ideal = write_tmp(
        "flag.json",
        r#"{"name": "h3", "dim": 3, "basis": ["X", "Y", "Z"], "flag": ["X", "Y", "Z"],
            "brackets": [{"i": 1, "j": 2, "coeffs": [0, 0, 1]}]}"#,
    );
    assert_eq!(ultrafine(&["check", not_ideal.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn toml_input_with_explicit_flag() {
    let path = write_tmp(
        "filiform.toml",
        r#"
name = "filiform4"
dim = 4
basis = ["X1", "X2", "X3", "X4"]
flag = ["X4", "X3", "X2", "X1"]

[[brackets]]
i = "X1"
j = "X2"
coeffs = [0, 0, 1, 0]

[[brackets]]
i = "X1"
j = "X3"
coeffs = [0, 0, 0, "1"]
"#,
    );
    let path = path.to_str().unwrap();
    let c = json_out(&["check", path]);
    assert_eq!(c["flag"]["basis"], json!(["X4", "X3", "X2", "X1"]));
    let l = json_out(&["layer", path, "1,0,0,0"]);
    assert_eq!(l["e"], json!([2, 4]));
}

#[test]
fn report_is_deterministic_and_round_trips() {
    let args = ["report", "catalog:filiform4", "--samples", "300", "--seed", "7", "--perturb", "8"];
    let a = ultrafine(&args);
    let b = ultrafine(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let doc = ultrafine::format::report_from_json(&text).unwrap();
    assert_eq!(ultrafine::format::report_to_json(&doc), text);
    assert_eq!(doc.chain_length, 3);
    assert_eq!(doc.openness.checked, 3 * 4 * 4 * 8);
    assert_eq!(
        doc.disclaimers,
        ["chain_length is an upper bound on minimal length", "layer set is a sampled lower bound"]
    );
}
