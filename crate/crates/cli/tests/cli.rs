use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn nichols(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nichols")).args(args).env_remove("RUST_LOG").output().expect("binary runs")
}

fn report(args: &[&str]) -> (Value, i32) {
    let out = nichols(args);
    let code = out.status.code().expect("exit code");
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (v, code)
}

#[test]
fn fk3_scenario_has_total_twelve() {
    let (v, code) = report(&["run", scenario("s3_fk3.json").to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["spec_version"], "1");
    assert_eq!(v["scenario"]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["result"]["targets"][0]["total"], 12);
    assert_eq!(v["result"]["targets"][0]["dims"], serde_json::json!([1, 3, 4, 3, 1]));
}

#[test]
fn s4_scenario_has_three_totals_576() {
    let (v, code) = report(&["run", scenario("s4_all_three.json").to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let totals: Vec<u64> = v["result"]["targets"].as_array().unwrap().iter().map(|t| t["total"].as_u64().unwrap()).collect();
    assert_eq!(totals, vec![576, 576, 576]);
}

#[test]
fn dihedral_scenario_gives_witness_and_bound() {
    let (v, code) = report(&["run", scenario("dn_obstruction.json").to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["normal_form"], "-v5");
    let b = &v["result"]["cartan_bounds"][0];
    assert_eq!((b["row"].as_i64(), b["column"].as_i64(), b["at_most"].as_i64()), (Some(1), Some(2), Some(-2)));
}

#[test]
fn s3_obstruction_and_expression_override() {
    let path = scenario("s3_obstruction.json");
    let (v, _) = report(&["derive", path.to_str().unwrap(), "--json"]);
    assert_eq!(v["result"]["normal_form"], "-x2");
    let (v, _) = report(&["derive", path.to_str().unwrap(), "--json", "--expr", "(d y2 (ad x1 y2))"]);
    assert_eq!(v["result"]["degree"], 1);
    assert_eq!(v["result"]["normal_form"], "x1");
}

#[test]
fn cartan_writes_csv_next_to_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cartan.json");
    let o = nichols(&["cartan", scenario("s3_obstruction.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("cartan.csv")).unwrap();
    assert!(csv.contains("1,2,-2,true"), "{csv}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["finite_type"]["finite"], false);
}

#[test]
fn groupoid_writes_dot_and_roots_are_a2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let path = scenario("a2_groupoid.json");
    let o = nichols(&["groupoid", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(dir.path().join("g.dot")).unwrap().starts_with("digraph"));
    let (v, code) = report(&["roots", path.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["positive"], serde_json::json!([[0, 1], [1, 0], [1, 1]]));
    assert_eq!(v["result"]["finite_type"]["label"], "A2");
}

#[test]
fn reflect_needs_a_block_and_keeps_dimensions() {
    let path = scenario("a2_groupoid.json");
    let o = nichols(&["reflect", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("reflect_at"));
    let (v, code) = report(&["reflect", path.to_str().unwrap(), "--at", "2", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["s"], serde_json::json!([[1, 0], [1, -1]]));
}

#[test]
fn low_cap_is_a_structured_refusal() {
    let (v, code) = report(&["groupoid", scenario("s3_obstruction.json").to_str().unwrap(), "--cap", "2", "--json"]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "refused");
    assert!(v["refusal"].as_str().unwrap().starts_with("(F_1) uncertified at cap 2"));
}

#[test]
fn schema_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(scenario("s3_fk3.json")).unwrap().replace("\"(12)\": \"-1\"", "\"(123)\": \"-1\"");
    std::fs::write(&bad, text).unwrap();
    let o = nichols(&["hilbert", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("modules[0].rho.values[\"(123)\"]"));
}

#[test]
fn numeration_file_overrides_module_numeration() {
    let dir = tempfile::tempdir().unwrap();
    let num = dir.path().join("num.json");
    std::fs::write(&num, r#"{"x": {"members": ["(12)", "(13)", "(23)"]}}"#).unwrap();
    let path = scenario("s3_fk3.json");
    let (v, _) = report(&["hilbert", path.to_str().unwrap(), "--numeration", num.to_str().unwrap(), "--json"]);
    assert_eq!(v["result"]["targets"][0]["total"], 12);
    std::fs::write(&num, r#"{"y": {"members": ["(12)", "(23)", "(13)"]}}"#).unwrap();
    let o = nichols(&["hilbert", path.to_str().unwrap(), "--numeration", num.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical() {
    for name in ["s3_fk3.json", "a2_groupoid.json", "dn_obstruction.json"] {
        let path = scenario(name);
        let a = nichols(&["run", path.to_str().unwrap(), "--json"]);
        let b = nichols(&["run", path.to_str().unwrap(), "--json"]);
        assert_eq!(a.stdout, b.stdout, "{name}");
    }
}

#[test]
fn verify_paper_matrix() {
    let (v, code) = report(&["verify-paper", "--json"]);
    assert_eq!(code, 0);
    let checks = v["result"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 11);
    for c in checks {
        let expect = if c["key"] == "s4_multiplication_table" { "FAIL" } else { "PASS" };
        assert_eq!(c["status"], expect, "{c}");
    }
    assert!(checks[5]["observed"].as_str().unwrap().starts_with("106/108"));
}

#[test]
fn tampered_sign_fails_the_fk3_check() {
    let dir = tempfile::tempdir().unwrap();
    let tampered = dir.path().join("tampered.json");
    let text = std::fs::read_to_string(scenario("s3_fk3.json")).unwrap().replace("\"(12)\": \"-1\"", "\"(12)\": \"1\"");
    std::fs::write(&tampered, text).unwrap();
    let (v, _) = report(&["verify-paper", tampered.to_str().unwrap(), "--json"]);
    let first = &v["result"]["checks"][0];
    assert_eq!(first["key"], "fk3_dimension");
    assert_eq!(first["status"], "FAIL");
}
