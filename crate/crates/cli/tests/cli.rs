use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn casimir(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}\nstderr:\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn catalog_file(dir: &Path, name: &str, params: &[&str]) -> String {
    let file = format!("{name}{}.json", params.join("_"));
    let mut args = vec!["catalog", name];
    args.extend_from_slice(params);
    args.extend_from_slice(&["--emit", &file]);
    let out = casimir(&args, dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    file
}

fn count(dir: &Path, file: &str) -> Value {
    let out = casimir(&["count", file], dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    json_of(&out)["result"].clone()
}

#[test]
fn counts_for_catalog_algebras() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let h2 = catalog_file(d, "heisenberg", &["2"]);
    let r = count(d, &h2);
    assert_eq!(r["dimension"], 5);
    assert_eq!(r["generic_rank"], 4);
    assert_eq!(r["invariant_count"], 1);
    assert_eq!(r["rank_certified"], true);

    let f2 = catalog_file(d, "frobenius_model", &["2"]);
    assert_eq!(count(d, &f2)["invariant_count"], 0);

    let a4 = catalog_file(d, "abelian", &["4"]);
    assert_eq!(count(d, &a4)["invariant_count"], 4);
}

#[test]
fn reports_are_deterministic_and_echo_inputs() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let f = catalog_file(d, "frobenius_model", &["1"]);
    let a = casimir(&["count", &f, "--seed", "42"], d);
    let b = casimir(&["count", &f, "--seed", "42"], d);
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    assert_eq!(v["result"]["seed"], 42);
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["tool"]["name"], "casimir-cli");
}

#[test]
fn check_reports_jacobi_violations() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let good = catalog_file(d, "so3", &[]);
    let out = casimir(&["check", &good], d);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["jacobi"], "pass");

    // [X1,X2] = X2, [X1,X3] = X3, [X2,X3] = X1 is not a Lie algebra.
    let bad = write(
        d,
        "bad.json",
        r#"{"dimension": 3, "brackets": [
            {"i": 1, "j": 2, "k": 2, "coeff": "1"},
            {"i": 1, "j": 3, "k": 3, "coeff": "1"},
            {"i": 2, "j": 3, "k": 1, "coeff": "1"}]}"#,
    );
    let out = casimir(&["check", bad.to_str().unwrap()], d);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(v["result"]["jacobi"], "fail");
    assert_eq!(v["result"]["violations"][0]["triple"], serde_json::json!([1, 2, 3]));

    let out = casimir(&["count", bad.to_str().unwrap()], d);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_one_with_location() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let p = write(d, "broken.json", "{\n  \"dimension\": 3,\n  \"brackets\": [\n}");
    let out = casimir(&["check", p.to_str().unwrap()], d);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));

    let p = write(d, "float.json", r#"{"dimension": 2, "brackets": [{"i": 1, "j": 2, "k": 1, "coeff": "0.5"}]}"#);
    let out = casimir(&["check", p.to_str().unwrap()], d);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("brackets[0].coeff"));

    let out = casimir(&["check", "missing.json"], d);
    assert_eq!(out.status.code(), Some(1));
    let out = casimir(&["count"], d);
    assert_eq!(out.status.code(), Some(1));
    let out = casimir(&["catalog", "nonesuch"], d);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invariants_lists_polynomial_basis() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let sl2 = catalog_file(d, "sl2", &[]);
    let out = casimir(&["invariants", &sl2, "--max-degree", "2"], d);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out)["result"].clone();
    assert_eq!(r["invariants"], serde_json::json!(["x1^2 + 4*x2*x3"]));
    assert_eq!(r["independence_lower_bound"], 1);

    let h1 = catalog_file(d, "heisenberg", &["1"]);
    let out = casimir(&["invariants", &h1, "--max-degree", "1"], d);
    assert_eq!(json_of(&out)["result"]["invariants"], serde_json::json!(["x3"]));
}

#[test]
fn contract_emits_limit_and_checks_inequalities() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let so3 = catalog_file(d, "so3", &[]);
    let fam = write(d, "fam.json", r#"{"type": "diagonal", "weights": [1, 1, 0]}"#);
    let out = casimir(
        &["contract", &so3, fam.to_str().unwrap(), "--emit", "limit.json", "--check-semicontinuity"],
        d,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json_of(&out)["result"].clone();
    assert_eq!(r["monotonicity"]["holds"], true);
    assert_eq!(r["semicontinuity"]["holds"], true);
    assert_eq!(r["semicontinuity"]["samples"].as_array().unwrap().len(), 4);

    // The emitted limit is the Euclidean algebra e(2), which still has one invariant.
    let limit = count(d, "limit.json");
    assert_eq!(limit["invariant_count"], 1);
    let check = casimir(&["check", "limit.json"], d);
    assert_eq!(check.status.code(), Some(0));
}

#[test]
fn divergent_family_exits_two_with_offending_triple() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let h1 = catalog_file(d, "heisenberg", &["1"]);
    let fam = write(d, "fam.json", r#"{"type": "diagonal", "weights": [0, 0, 1]}"#);
    let out = casimir(&["contract", &h1, fam.to_str().unwrap()], d);
    assert_eq!(out.status.code(), Some(2));
    let r = json_of(&out)["result"].clone();
    assert_eq!(r["divergent"], serde_json::json!({"i": 1, "j": 2, "k": 3}));
}

#[test]
fn matrix_families() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let sl2 = catalog_file(d, "sl2", &[]);
    let singular = write(d, "sing.json", r#"{"type": "matrix", "entries": [["e","e","0"],["1","1","0"],["0","0","1"]]}"#);
    let out = casimir(&["contract", &sl2, singular.to_str().unwrap()], d);
    assert_eq!(out.status.code(), Some(2));

    let scaled = write(
        d,
        "scale.json",
        r#"{"type": "matrix", "entries": [["e","0","0"],["0","e","0"],["0","0","e"]]}"#,
    );
    let out = casimir(&["contract", &sl2, scaled.to_str().unwrap()], d);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["limit"]["brackets"], serde_json::json!([]));

    let wrong_dim = write(d, "two.json", r#"{"type": "diagonal", "weights": [1, 1]}"#);
    let out = casimir(&["contract", &sl2, wrong_dim.to_str().unwrap()], d);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn rule_out_uses_invariant_counts() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let f1 = catalog_file(d, "frobenius_model", &["1"]);
    let a4 = catalog_file(d, "abelian", &["4"]);
    let out = casimir(&["rule-out", &a4, &f1], d);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out)["result"].clone();
    assert_eq!(r["verdict"], "RuledOut");
    assert_eq!(r["invariant_counts"], serde_json::json!([4, 0]));

    let out = casimir(&["rule-out", &f1, &a4], d);
    assert_eq!(json_of(&out)["result"]["verdict"], "Possible");
}

#[test]
fn large_dimension_warns_without_certify() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let h5 = catalog_file(d, "heisenberg", &["5"]);
    let out = casimir(&["count", &h5], d);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let r = json_of(&out)["result"].clone();
    assert_eq!(r["invariant_count"], 1);
    assert_eq!(r["rank_certified"], false);
}

#[test]
fn catalog_prints_to_stdout() {
    let dir = TempDir::new().unwrap();
    let out = casimir(&["catalog", "heisenberg", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["dimension"], 3);
    assert_eq!(v["brackets"].as_array().unwrap().len(), 1);
}

#[test]
fn sl2_contracts_to_heisenberg() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let sl2 = catalog_file(d, "sl2", &[]);
    // Weights 1 on E and F, 2 on H, in the stored order (H, E, F).
    let fam = write(d, "fam.json", r#"{"type": "diagonal", "weights": [2, 1, 1]}"#);
    let out = casimir(&["contract", &sl2, fam.to_str().unwrap(), "--emit", "h.json"], d);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out)["result"].clone();
    assert_eq!(r["monotonicity"]["source"]["invariant_count"], 1);
    assert_eq!(r["monotonicity"]["limit"]["invariant_count"], 1);
    assert_eq!(
        r["limit"]["brackets"],
        serde_json::json!([{"i": 2, "j": 3, "k": 1, "coeff": "1"}])
    );
}

#[test]
fn rule_out_examples() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let a3 = catalog_file(d, "abelian", &["3"]);
    let h1 = catalog_file(d, "heisenberg", &["1"]);
    let sl2 = catalog_file(d, "sl2", &[]);
    let so3 = catalog_file(d, "so3", &[]);
    let verdict = |a: &str, b: &str| json_of(&casimir(&["rule-out", a, b], d))["result"]["verdict"].clone();
    assert_eq!(verdict(&a3, &h1), "RuledOut");
    assert_eq!(verdict(&sl2, &h1), "Possible");
    assert_eq!(verdict(&sl2, &so3), "Possible");
    assert_eq!(verdict(&sl2, &catalog_file(d, "heisenberg", &["2"])), "RuledOut");
}

#[test]
fn invariants_degree_filtering() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let h1 = catalog_file(d, "heisenberg", &["1"]);
    let r = json_of(&casimir(&["invariants", &h1, "--max-degree", "2"], d))["result"].clone();
    assert_eq!(r["invariants"], serde_json::json!(["x3", "x3^2"]));
    assert_eq!(r["independence_lower_bound"], 1);

    let sl2 = catalog_file(d, "sl2", &[]);
    let r = json_of(&casimir(&["invariants", &sl2, "--max-degree", "1"], d))["result"].clone();
    assert_eq!(r["invariants"], serde_json::json!([]));

    let so3 = catalog_file(d, "so3", &[]);
    let r = json_of(&casimir(&["invariants", &so3, "--max-degree", "2"], d))["result"].clone();
    assert_eq!(r["invariants"], serde_json::json!(["x1^2 + x2^2 + x3^2"]));

    let out = casimir(&["invariants", &so3, "--max-degree", "0"], d);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_catalog_name_lists_available() {
    let dir = TempDir::new().unwrap();
    let out = casimir(&["catalog", "e8"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("heisenberg") && err.contains("sl2"), "{err}");
}
