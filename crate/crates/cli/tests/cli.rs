use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pitchcut")).args(args).output().expect("binary runs")
}

fn fx(name: &str) -> String {
    fixture(name).display().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.display().to_string()
}

#[test]
fn build_writes_lp_and_checks_size_bound() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("tri.lp");
    let out = run(&["build", &fx("triangle.json"), "--pi", "2", "--out", lp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("level 2: 21 variables"), "{text}");
    assert!(text.contains(": ok"), "{text}");
    let (sys, _) = pitchcut::lp::parse_lp(&fs::read_to_string(&lp).unwrap()).unwrap();
    assert_eq!(sys.num_vars(), 21);
}

#[test]
fn build_without_out_prints_lp() {
    let out = run(&["build", &fx("triangle.json"), "--pi", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("Minimize"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("level 1"));
}

#[test]
fn build_respects_guard() {
    let out = run(&["build", &fx("triangle.json"), "--pi", "3", "--guard-nonzeros", "10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn certify_reports_negative_slack_below_the_pitch() {
    let dir = tempfile::tempdir().unwrap();
    let ineq = write_temp(&dir, "ineq.json", r#"{"coeffs":["1","1","1"],"rhs":"2"}"#);
    let low = run(&["certify", &fx("triangle.json"), "--pi", "1", "--ineq", &ineq]);
    assert_eq!(low.status.code(), Some(3));
    assert!(stdout(&low).contains("pitch 2, slack -1/2"), "{}", stdout(&low));
    let high = run(&["certify", &fx("triangle.json"), "--pi", "2", "--ineq", &ineq]);
    assert_eq!(high.status.code(), Some(0));
    assert!(stdout(&high).contains("slack 0"));
}

#[test]
fn certify_enumerated_inequalities() {
    let out = run(&["certify", &fx("triangle.json"), "--pi", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 violated"), "{}", stdout(&out));
}

#[test]
fn separate_finds_cut_with_both_methods() {
    let out = run(&["separate", &fx("2monotone.json"), &fx("2monotone_point.json"), "--method", "both"]);
    assert_eq!(out.status.code(), Some(10));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["agree"], Value::Bool(true));
    assert_eq!(v["types"]["status"], "violated");
    assert_eq!(v["p2"]["status"], "violated");
    assert_eq!(v["p2"]["slack"], "-1");
}

#[test]
fn separate_certifies_integer_point() {
    let dir = tempfile::tempdir().unwrap();
    let ones = write_temp(&dir, "ones.json", r#"["1","1","1","1","1","1","1","1"]"#);
    let result = dir.path().join("result.json");
    let out = run(&["separate", &fx("knapex.json"), &ones, "--p", "3", "--out", result.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(result).unwrap()).unwrap();
    assert_eq!(v["status"], "certified");
    assert_eq!(v["p"], 3);
}

#[test]
fn coarse_grid_makes_methods_disagree() {
    let out = run(&["separate", &fx("2monotone.json"), &fx("2monotone_point.json"), "--method", "both", "--grid", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["agree"], Value::Bool(false));
}

#[test]
fn separate_output_independent_of_jobs() {
    let args = |jobs: &'static str| {
        run(&["separate", &fx("knapex.json"), &fx("knapex_point.json"), "--p", "3", "--jobs", jobs])
    };
    let (one, four) = (args("1"), args("4"));
    assert_eq!(one.status.code(), four.status.code());
    assert_eq!(stdout(&one), stdout(&four));
}

#[test]
fn p2_method_needs_p_two() {
    let out = run(&["separate", &fx("2monotone.json"), &fx("2monotone_point.json"), "--method", "p2", "--p", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn epsilon_outside_unit_interval_is_rejected() {
    for eps in ["0", "1", "3/2"] {
        let out = run(&["separate", &fx("2monotone.json"), &fx("2monotone_point.json"), "--epsilon", eps]);
        assert_eq!(out.status.code(), Some(1), "epsilon {eps}");
    }
}

#[test]
fn malformed_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(&dir, "bad.json", "[1/2]");
    let out = run(&["separate", &fx("2monotone.json"), &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn oracle_validity_of_all_ones() {
    let out = run(&["oracle", "validity", &fx("3notmonotone.json"), &fx("3notmonotone_ones_rhs2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["valid"], Value::Bool(true));
    assert_eq!(v["signature"], Value::Bool(true));
}

#[test]
fn oracle_omega_matches_p2_depth() {
    let out = run(&["oracle", "omega", &fx("2monotone.json"), &fx("2monotone_point.json")]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["slack"], "-1");
}

#[test]
fn oracle_drag_lists_sets_and_signature() {
    let out = run(&["oracle", "drag", &fx("knapex.json"), &fx("knapex_exq3.json"), "--strengthen", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("drag 3: [3, 4]"), "{text}");
    assert!(text.contains("signature: 190"), "{text}");
    assert!(text.contains("strengthened: x1 + x2 + x3 + x4 + 3 x6 + 3 x7 + 3 x8 >= 4"), "{text}");
}

#[test]
fn oracle_strongest_on_triangle() {
    let all = stdout(&run(&["oracle", "strongest", &fx("triangle.json"), "--p", "2"]));
    let kept = stdout(&run(&["oracle", "strongest", &fx("triangle.json"), "--p", "2", "--undominated"]));
    for text in [&all, &kept] {
        assert!(text.contains("x1 + x2 + x3 >= 2\tpitch 2"), "{text}");
    }
    assert!(all.contains("2 x1 + x2 + x3 >= 2"), "{all}");
    assert!(!kept.contains("2 x1 + x2 + x3 >= 2"), "{kept}");
}

#[test]
fn selfcheck_is_reproducible() {
    let a = run(&["oracle", "selfcheck", "--seed", "11", "--count", "8"]);
    let b = run(&["oracle", "selfcheck", "--seed", "11", "--count", "8"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("8 of 8 consistent"));
}
