use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tpa_core::action::verify_tpa;
use tpa_core::exactalg::linalg::scale_vector;
use tpa_core::fixtures::{partial_single_arrow, G, G_INV};
use tpa_core::FieldSpec;

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn tpa(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_tpa")).args(args).output().expect("binary runs");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), json)
}

fn run(cmd: &str, file: &Path, extra: &[&str]) -> (i32, Value) {
    let mut args = vec![cmd, file.to_str().unwrap()];
    args.extend_from_slice(extra);
    tpa(&args)
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["reports"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r["checks"].as_array().unwrap())
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check named {name}"))
}

#[test]
fn shipped_action_verifies() {
    let (code, report) = run("verify-action", &example("single_arrow.toml"), &[]);
    assert_eq!(code, 0);
    assert_eq!(report["passed"], true);
    assert_eq!(report["command"], "verify-action");
    assert_eq!(report["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn empty_groupoid_is_an_input_error() {
    assert_eq!(run("verify-action", &example("empty_groupoid.toml"), &[]).0, 2);
}

#[test]
fn unknown_keys_and_missing_files_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(example("single_arrow.toml")).unwrap();
    std::fs::write(&path, format!("colour = \"red\"\n{text}")).unwrap();
    assert_eq!(run("verify-action", &path, &[]).0, 2);
    assert_eq!(run("verify-action", &dir.path().join("missing.toml"), &[]).0, 2);
}

#[test]
fn reports_are_deterministic_up_to_timing() {
    for cmd in ["verify-action", "crossed-product", "globalize", "exel", "semigroup-action"] {
        let (_, mut a) = run(cmd, &example("single_arrow.toml"), &["--seed", "7"]);
        let (_, mut b) = run(cmd, &example("single_arrow.toml"), &["--seed", "7"]);
        strip_timing(&mut a);
        strip_timing(&mut b);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap(), "{cmd}");
        assert_eq!(a["seed"], 7);
    }
}

#[test]
fn failed_twist_reports_a_witness_the_library_reproduces() {
    let (code, report) = run("verify-action", &example("broken_twist.toml"), &[]);
    assert_eq!(code, 1);
    let c = check(&report, "(vi) twisted cocycle identity");
    let tuples: Vec<Vec<String>> = c["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["tuple"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect())
        .collect();
    assert!(tuples.contains(&vec!["g".into(), "g^-1".into(), "g".into()]));

    let f = FieldSpec::Prime(3);
    let a = partial_single_arrow(f).unwrap();
    let e1 = a.algebra().basis_element(0);
    let mutated = a.with_twist(G, G_INV, scale_vector(&f.one(), &e1));
    let replay = verify_tpa(&mutated).unwrap();
    let lib = replay.check("(vi) twisted cocycle identity").unwrap();
    let lib_tuples: Vec<Vec<String>> = lib.witnesses.iter().map(|w| w.tuple.clone()).collect();
    assert_eq!(lib_tuples, tuples);
}

#[test]
fn globalize_records_the_reading() {
    let (code, report) = run("globalize", &example("single_arrow.toml"), &[]);
    assert_eq!(code, 0);
    assert_eq!(report["data"]["reading"], "corrected");
    let (code, report) = run("globalize", &example("single_arrow.toml"), &["--star-literal"]);
    assert_eq!(report["data"]["reading"], "literal");
    assert_eq!(report["data"]["extension_passed"], false);
    assert_eq!(code, 1);
    assert!(!check(&report, "cocycle condition on wt")["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn emitted_global_action_is_a_valid_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("global.toml");
    let (code, global) = run("globalize", &example("single_arrow.toml"), &["--emit", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, report) = run("verify-action", &out, &[]);
    assert_eq!(code, 0);
    assert_eq!(report["data"]["algebra_dim"], global["data"]["global_dim"]);
}

#[test]
fn extension_data_can_come_from_a_second_file() {
    let (code, _) = run(
        "globalize",
        &example("single_arrow.toml"),
        &["--extension", example("single_arrow.toml").to_str().unwrap()],
    );
    assert_eq!(code, 0);
}

#[test]
fn crossed_product_and_morita_reports() {
    let (code, report) = run("crossed-product", &example("single_arrow.toml"), &[]);
    assert_eq!(code, 0);
    assert_eq!(report["data"]["dim"], 6);
    let (code, report) = run("morita-check", &example("single_arrow.toml"), &[]);
    assert_eq!(code, 0);
    assert_eq!(report["data"]["dims"]["A"], 6);
}

#[test]
fn exel_lists_elements_and_ideals() {
    let (code, report) = run("exel", &example("single_arrow.toml"), &[]);
    assert_eq!(code, 0);
    let n = report["data"]["elements"].as_array().unwrap().len();
    assert_eq!(report["data"]["table"].as_array().unwrap().len(), n);
    assert!(report["data"]["ideals"].as_array().unwrap().len() > 1);
}

#[test]
fn factor_sets_and_representations_check() {
    let (code, report) = run("cocycle-check", &example("factor_set.toml"), &[]);
    assert_eq!(code, 0);
    assert_eq!(report["data"]["factor_set"]["g,g^-1"], "2 mod 3");
    assert_eq!(run("roundtrip", &example("factor_set.toml"), &[]).0, 0);
}

#[test]
fn schur_respects_its_caps() {
    assert_eq!(run("schur", &example("single_arrow.toml"), &[]).0, 0);
    assert_eq!(run("schur", &example("single_arrow.toml"), &["--max-field", "2"]).0, 3);
    assert_eq!(run("verify-action", &example("single_arrow.toml"), &["--max-arrows", "2"]).0, 3);
}

#[test]
fn semigroup_commands_succeed_on_the_shipped_action() {
    let (code, report) = run("semigroup-action", &example("single_arrow.toml"), &["--tables"]);
    assert_eq!(code, 0);
    assert_eq!(report["data"]["semigroup_size"], 81);
    assert_eq!(report["data"]["embedding"]["surjective"], false);
    assert_eq!(report["data"]["semigroup"]["elements"].as_array().unwrap().len(), 81);
    assert_eq!(run("roundtrip", &example("single_arrow.toml"), &[]).0, 0);
}

#[test]
fn text_format_prints_one_line_per_check() {
    let out = Command::new(env!("CARGO_BIN_EXE_tpa"))
        .args(["verify-action", "--format", "text", example("single_arrow.toml").to_str().unwrap()])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
    assert!(text.contains("(vi) twisted cocycle identity"));
}
