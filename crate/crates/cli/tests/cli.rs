//! End-to-end tests for the zxcheck binary: exit codes, text output, and
//! JSON determinism.

use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn catalog(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../rules").join(name)
}

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn zxcheck(args: &[&str]) -> Output {
    zxcheck_env(args, &[])
}

fn zxcheck_env(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zxcheck"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Output {
        code: out.status.code().expect("no signal"),
        stdout: String::from_utf8(out.stdout).expect("utf8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf8 stderr"),
    }
}

#[test]
fn eval_prints_exact_matrix() {
    let path = fixture("chain.zx");
    let out = zxcheck(&["eval", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert!(out.stdout.contains("backend=exact"), "stdout: {}", out.stdout);
    assert!(out.stdout.contains("# name=chain"));
}

#[test]
fn eval_float_backend_and_json() {
    let path = fixture("chain.zx");
    let out = zxcheck(&["eval", path.to_str().unwrap(), "--backend", "float", "--json"]);
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).expect("valid json");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "eval");
    assert_eq!(v["backend"], "float");
    assert_eq!(v["rows"], 2);
    assert_eq!(v["cols"], 2);
}

#[test]
fn eval_parse_error_exits_2() {
    let out = zxcheck(&["eval", fixture("bad_parse.zx").to_str().unwrap()]);
    assert_eq!(out.code, 2, "stderr: {}", out.stderr);
    assert!(out.stderr.contains("parse error at 2:"), "stderr: {}", out.stderr);
}

#[test]
fn eval_arity_error_exits_3() {
    let out = zxcheck(&["eval", fixture("arity.zx").to_str().unwrap()]);
    assert_eq!(out.code, 3, "stderr: {}", out.stderr);
}

#[test]
fn eval_wire_cap_exits_4() {
    let out = zxcheck(&["eval", fixture("wide.zx").to_str().unwrap(), "--wire-cap", "2"]);
    assert_eq!(out.code, 4, "stderr: {}", out.stderr);
}

#[test]
fn eval_wire_cap_env_override() {
    let out = zxcheck_env(
        &["eval", fixture("wide.zx").to_str().unwrap()],
        &[("ZXCHECK_WIRE_CAP", "2")],
    );
    assert_eq!(out.code, 4, "stderr: {}", out.stderr);
}

#[test]
fn eval_missing_file_exits_2() {
    let out = zxcheck(&["eval", fixture("no_such_file.zx").to_str().unwrap()]);
    assert_eq!(out.code, 2);
}

#[test]
fn verify_axioms_passes_on_shipped_catalog() {
    let dir = catalog("axioms");
    let out = zxcheck(&[
        "verify-axioms",
        dir.to_str().unwrap(),
        "--exact-samples",
        "3",
        "--float-samples",
        "3",
    ]);
    assert_eq!(out.code, 0, "stdout: {}\nstderr: {}", out.stdout, out.stderr);
    assert!(out.stdout.contains("checked 12 rules: 12 sound, 0 failing"));
}

#[test]
fn verify_axioms_flags_corrupted_rule() {
    let dir = fixture("");
    let out = zxcheck(&[
        "verify-axioms",
        dir.to_str().unwrap(),
        "--exact-samples",
        "20",
        "--float-samples",
        "20",
    ]);
    assert_eq!(out.code, 1, "stdout: {}", out.stdout);
    assert!(out.stdout.contains("rule k_bad: FAIL"), "stdout: {}", out.stdout);
    assert!(out.stdout.contains("alpha="), "counterexample should name the binding");
}

#[test]
fn verify_axioms_empty_dir_warns_and_passes() {
    let dir = std::env::temp_dir().join(format!("zxcheck-empty-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = zxcheck(&["verify-axioms", dir.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert!(out.stderr.contains("warning"), "stderr: {}", out.stderr);
    assert!(out.stdout.contains("checked 0 rules"));
}

#[test]
fn verify_axioms_missing_dir_exits_2() {
    let out = zxcheck(&["verify-axioms", "/nonexistent/catalog/path"]);
    assert_eq!(out.code, 2);
}

#[test]
fn verify_axioms_json_is_deterministic() {
    let dir = catalog("axioms");
    let args = [
        "verify-axioms",
        dir.to_str().unwrap(),
        "--exact-samples",
        "2",
        "--float-samples",
        "2",
        "--seed",
        "7",
        "--json",
    ];
    let a = zxcheck(&args);
    let b = zxcheck(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout, "JSON output must be byte-identical across runs");
    let v: serde_json::Value = serde_json::from_str(&a.stdout).expect("valid json");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["report"]["all_sound"], true);
}

#[test]
fn sup_to_cyc_reports_five_steps() {
    let out = zxcheck(&["sup-to-cyc", "--p", "3"]);
    assert_eq!(out.code, 0, "stdout: {}", out.stdout);
    assert_eq!(out.stdout.matches("step ").count(), 5);
    assert!(out.stdout.contains("result: all steps passed"));
}

#[test]
fn sup_to_cyc_11_notes_extraction_width() {
    let out = zxcheck(&["sup-to-cyc", "--p", "11", "--json"]);
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).expect("valid json");
    assert_eq!(v["extraction_level"], 5);
    assert_eq!(v["granularity"], "2*pi/32");
    assert_eq!(v["all_passed"], true);
}

#[test]
fn sup_to_cyc_rejects_composite_exits_3() {
    let out = zxcheck(&["sup-to-cyc", "--p", "4"]);
    assert_eq!(out.code, 3, "stderr: {}", out.stderr);
}

#[test]
fn euler_solve_finds_swapped_chain() {
    let path = fixture("chain.zx");
    let out = zxcheck(&["euler", "solve", "--matrix", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "stdout: {}\nstderr: {}", out.stdout, out.stderr);
    assert!(out.stdout.contains("chain: Z("), "stdout: {}", out.stdout);
    assert!(out.stdout.contains("swapped form: X("), "stdout: {}", out.stdout);
}

#[test]
fn euler_classify_matches_family() {
    let out = zxcheck(&["euler", "classify", "--lhs", "pi,pi,pi", "--rhs", "pi,0,0"]);
    assert_eq!(out.code, 0, "stdout: {}", out.stdout);
    assert!(out.stdout.contains("family 1"), "stdout: {}", out.stdout);
}

#[test]
fn euler_classify_rejects_non_equality() {
    let out = zxcheck(&["euler", "classify", "--lhs", "pi/3,pi/5,0", "--rhs", "0,0,0"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("not an equality"), "stdout: {}", out.stdout);
}

#[test]
fn euler_enumerate_classifies_everything() {
    let out = zxcheck(&["euler", "enumerate", "--max-den", "2", "--json"]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).expect("valid json");
    assert_eq!(v["unclassified"], 0);
    assert!(v["total"].as_u64().unwrap() > 0);
}

#[test]
fn radin_sadun_word_verdict() {
    let out = zxcheck(&["radin-sadun", "--word", "0"]);
    assert_eq!(out.code, 0, "stdout: {}", out.stdout);
    assert!(out.stdout.contains("verdict: conclusion-holds"), "stdout: {}", out.stdout);
}

#[test]
fn radin_sadun_sweep_finds_no_counterexample() {
    let out = zxcheck(&["radin-sadun", "--len", "2", "--max-den", "2"]);
    assert_eq!(out.code, 0, "stdout: {}", out.stdout);
    assert!(out.stdout.contains("counterexamples: 0"), "stdout: {}", out.stdout);
}

#[test]
fn scale_test_passes_on_true_equality() {
    let path = fixture("euler_f1.zx");
    let out = zxcheck(&[
        "scale-test",
        "--file",
        path.to_str().unwrap(),
        "--n",
        "2",
        "--kmax",
        "9",
    ]);
    assert_eq!(out.code, 0, "stdout: {}\nstderr: {}", out.stdout, out.stderr);
    assert!(out.stdout.contains("all scale factors agree"));
    assert_eq!(out.stdout.matches("equal").count(), 5, "k = 1,3,5,7,9");
}

#[test]
fn scale_test_catches_single_point_coincidence() {
    let path = fixture("coincidence.zx");
    let out = zxcheck(&[
        "scale-test",
        "--file",
        path.to_str().unwrap(),
        "--n",
        "2",
        "--kmax",
        "9",
    ]);
    assert_eq!(out.code, 1, "stdout: {}", out.stdout);
    assert!(out.stdout.contains("first failure at k=3"), "stdout: {}", out.stdout);
}
