use std::path::{Path, PathBuf};
use std::process::Command;

use cqh_cli::catalog::catalog;
use cqh_core::cqhfile::emit_cqh;
use cqh_core::exactlin::Field;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn cqh(args: &[&str]) -> (i32, String, String) {
    cqh_env(args, None)
}

fn cqh_env(args: &[&str], seed: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cqh"));
    cmd.current_dir(fixtures()).args(args);
    match seed {
        Some(s) => cmd.env("CQH_SEED", s),
        None => cmd.env_remove("CQH_SEED"),
    };
    let out = cmd.output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn verify_cq_z2_exits_zero() {
    let (code, out, _) = cqh(&["verify", "cq_z2.cqh"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("VERIFIED"));
}

#[test]
fn galois_verdict_lines() {
    let (code, out, _) = cqh(&["galois", "oct_h.cqh", "oct_a.cqh"]);
    assert_eq!((code, out.lines().last()), (0, Some("GALOIS rank=64/64")));
    let (code, out, _) = cqh(&["galois", "notsg_h.cqh", "notsg_a.cqh"]);
    assert_eq!((code, out.lines().last()), (1, Some("NOT GALOIS corank=2")));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(cqh(&["frobnicate"]).0, 2);
    assert_eq!(cqh(&["galois", "oct_h.cqh"]).0, 2);
    assert_eq!(cqh(&["verify", "missing.cqh"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cqh");
    std::fs::write(&bad, "field Q\nkind coquasihopf\ndim 2\nm 1 1\n").unwrap();
    let (code, _, err) = cqh(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("parse error at 4:"), "{err}");
    assert_eq!(cqh(&["galois", "oct_a.cqh", "oct_a.cqh"]).0, 2, "algebra file in host position");
}

#[test]
fn failing_axioms_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixtures().join("cq_z2.cqh")).unwrap().replace("beta 2 -1", "beta 2 1");
    let path = dir.path().join("broken.cqh");
    std::fs::write(&path, text).unwrap();
    let (code, out, _) = cqh(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("[FAIL]"));
}

#[test]
fn json_report_has_schema_and_verdicts() {
    let (code, out, _) = cqh(&["--json", "galois", "mat_h.cqh", "mat_a.cqh"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "galois");
    assert_eq!(v["verdicts"]["galois"], true);
    assert_eq!(v["verdicts"]["rank"], 8);
    assert_eq!(v["field"], "Q");
    assert!(v["sections"][0]["report"]["entries"].as_array().is_some_and(|e| !e.is_empty()));
}

#[test]
fn verify_flag_adds_axiom_sections() {
    let (code, out, _) = cqh(&["--json", "--verify", "galois", "self_h.cqh", "self_a.cqh"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let names: Vec<&str> = v["sections"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["axioms self_h.cqh", "axioms self_a.cqh", "can"]);
}

#[test]
fn seed_is_reported_and_honoured() {
    let (_, out, _) = cqh_env(&["--json", "normalbasis", "oct_h.cqh", "oct_a.cqh"], Some("42"));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["seed"], 42);
    let (_, out, _) = cqh_env(&["--json", "normalbasis", "oct_h.cqh", "oct_a.cqh"], None);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["seed"], 0);
}

#[test]
fn cleftify_then_cleft() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("mat");
    let (code, out, _) = cqh(&["cleftify", "mat_h.cqh", "mat_a.cqh", "--out", prefix.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let gamma = dir.path().join("mat_gamma.cqh");
    let delta = dir.path().join("mat_delta.cqh");
    let (code, out, _) = cqh(&["cleft", "mat_h.cqh", "mat_a.cqh", gamma.to_str().unwrap(), delta.to_str().unwrap()]);
    assert_eq!((code, out.lines().last()), (0, Some("CLEFT")));
    let (code, out, _) = cqh(&["cleft", "mat_h.cqh", "mat_a.cqh", gamma.to_str().unwrap(), gamma.to_str().unwrap()]);
    assert_eq!((code, out.lines().last()), (1, Some("NOT CLEFT")));
    let (code, _, _) = cqh(&["cleftify", "notsg_h.cqh", "notsg_a.cqh"]);
    assert_eq!(code, 1);
}

#[test]
fn other_subcommands() {
    for args in [
        &["coinvariants", "mat_h.cqh", "mat_a.cqh"][..],
        &["translation", "h4t_h.cqh", "h4t_a.cqh"],
        &["twist", "oct_g.cqh", "oct_twist.cqh"],
        &["twist", "h4.cqh", "h4_twist.cqh"],
        &["drinfeld", "cq_z2.cqh"],
        &["bialgebroid", "oct_h.cqh", "oct_a.cqh"],
        &["battery", "oct_h.cqh", "oct_a.cqh"],
        &["verify", "mat_h.cqh", "mat_a.cqh"],
        &["verify", "quat_g.cqh", "quat_twist.cqh"],
    ] {
        let (code, out, err) = cqh(args);
        assert_eq!(code, 0, "{args:?}\n{out}{err}");
    }
    let (_, out, _) = cqh(&["bialgebroid", "oct_h.cqh", "oct_a.cqh"]);
    assert!(out.contains("L dim=8") && out.contains("A not associative"));
    let (code, _, _) = cqh(&["translation", "notsg_h.cqh", "notsg_a.cqh"]);
    assert_eq!(code, 1);
    let (code, out, _) = cqh(&["normalbasis", "notsg_h.cqh", "notsg_a.cqh"]);
    assert_eq!((code, out.trim()), (1, "NO NORMAL BASIS"));
}

#[test]
fn selftest_passes() {
    let (code, out, _) = cqh(&["selftest"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn shipped_fixtures_match_the_catalog() {
    let examples = catalog(Field::Rational).unwrap();
    for e in &examples {
        let shipped = std::fs::read_to_string(fixtures().join(format!("{}.cqh", e.name))).unwrap();
        assert_eq!(shipped, emit_cqh(&e.doc), "{} is stale; regenerate with `cqh example --all fixtures`", e.name);
    }
    let (code, out, _) = cqh(&["example", "--list"]);
    assert_eq!((code, out.lines().count()), (0, examples.len()));
    let (code, out, _) = cqh(&["example", "cq_z2"]);
    assert_eq!(code, 0);
    assert_eq!(out, std::fs::read_to_string(fixtures().join("cq_z2.cqh")).unwrap());
    assert_eq!(cqh(&["example", "nope"]).0, 2);
}

#[test]
fn json_is_deterministic_apart_from_timing() {
    let strip = |s: String| {
        let mut v: serde_json::Value = serde_json::from_str(&s).unwrap();
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    let a = strip(cqh(&["--json", "battery", "mat_h.cqh", "mat_a.cqh"]).1);
    let b = strip(cqh(&["--json", "battery", "mat_h.cqh", "mat_a.cqh"]).1);
    assert_eq!(a, b);
}
