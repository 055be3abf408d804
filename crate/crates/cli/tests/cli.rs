use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

use gt_cli::{run, BUDGET, INVALID, OK, USAGE};
use gt_core::calculus::{cut, load_derivation};
use gt_core::prover::prove;
use gt_core::semantics::{satisfies, Team};
use gt_core::{check_derivation, parse_formula, Derivation, Sequent};

fn gt(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(std::iter::once("gt").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, text) = gt(&full);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")))
}

fn tmp(name: &str, v: &Value) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path
}

fn proof(s: &str) -> Derivation {
    prove(&s.parse::<Sequent>().unwrap()).unwrap().unwrap()
}

#[test]
fn prove_round_trips_through_json() {
    let (code, v) = json(&["prove", "p || q, ~p => q"]);
    assert_eq!(code, OK);
    let d = load_derivation(&v).unwrap();
    check_derivation(&d).unwrap();
    assert_eq!(d.conclusion, "p || q, ~p => q".parse().unwrap());
}

#[test]
fn countermodel_is_a_team() {
    let (code, v) = json(&["prove", "=> p || ~p"]);
    assert_eq!(code, INVALID);
    let t: Team = serde_json::from_value(v).unwrap();
    assert_eq!(t.to_string(), "{[p=0], [p=1]}");
    assert!(!satisfies(&t, &parse_formula("p || ~p").unwrap()).unwrap());
}

#[test]
fn exit_codes() {
    assert_eq!(gt(&["valid", "p => p"]).0, OK);
    assert_eq!(gt(&["valid", "p => q"]).0, INVALID);
    assert_eq!(gt(&["valid", "p => (q"]).0, USAGE);
    assert_eq!(gt(&["frobnicate"]).0, USAGE);
    assert_eq!(gt(&["--max-vars", "2", "valid", "p, q => r"]).0, BUDGET);
    assert_eq!(gt(&["--budget", "5", "prove", "p || q, q || r, r || p => (p & q) || (q & r) || (r & p) || s"]).0, BUDGET);
    assert_eq!(gt(&["--help"]).0, OK);
}

#[test]
fn json_errors_carry_the_exit_code() {
    let (code, v) = json(&["valid", "p =>> q"]);
    assert_eq!(code, USAGE);
    assert_eq!(v["exit"], USAGE);
    assert!(v["error"].as_str().unwrap().len() > 3);
}

#[test]
fn golden_text_outputs() {
    let team: Value = serde_json::from_str(&gt(&["prove", "=> p || ~p"]).1).unwrap();
    assert_eq!(team, serde_json::json!({ "vars": ["p"], "team": [[0], [1]] }));
    assert_eq!(gt(&["resolutions", "p & (q || r)"]).1, "p & q\np & r\n");
    assert_eq!(gt(&["resolutions", "--degree", "1", "p || (q || r)"]).1, "p\nq || r\np || q\np || r\n");
    assert_eq!(gt(&["valid", "p => p"]).1, "valid\n");
    assert_eq!(gt(&["interpolate", "p ; => ; p || q"]).1, "p\n");
    let closure = gt(&["closure", "p || q"]).1;
    assert!(closure.contains("union closed: false") && closure.contains("flat: false"), "{closure}");
}

#[test]
fn check_reports_the_broken_node() {
    let d = proof("p & q => q & p");
    let path = tmp("good.json", &d.to_json());
    assert_eq!(gt(&["check", path.to_str().unwrap()]).0, OK);

    let mut bad = d.clone();
    bad.premises[0].conclusion = "p, q => q".parse().unwrap();
    let path = tmp("bad.json", &bad.to_json());
    let (code, text) = gt(&["check", path.to_str().unwrap()]);
    assert_eq!(code, INVALID);
    assert!(text.starts_with("violation at ["), "{text}");

    let (code, v) = json(&["check", path.to_str().unwrap()]);
    assert_eq!(code, INVALID);
    assert_eq!(v["ok"], false);

    let missing = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("absent.json");
    assert_eq!(gt(&["check", missing.to_str().unwrap()]).0, USAGE);
}

#[test]
fn eval_reads_a_team_file() {
    let (_, team) = json(&["prove", "=> p || ~p"]);
    let path = tmp("team.json", &team);
    assert_eq!(gt(&["eval", "p | ~p", "--team", path.to_str().unwrap()]), (OK, "true\n".into()));
    assert_eq!(gt(&["eval", "p || ~p", "--team", path.to_str().unwrap()]).0, INVALID);
}

#[test]
fn transforms_on_files() {
    let d = proof("p || q, r => (p & r) || (q & r)");
    let path = tmp("normal.json", &d.to_json());
    let (code, v) = json(&["normalize", path.to_str().unwrap()]);
    assert_eq!(code, OK);
    let n = load_derivation(&v).unwrap();
    assert!(n.is_phase_ordered());
    assert_eq!(n.conclusion, d.conclusion);

    let (code, v) = json(&["resolve", path.to_str().unwrap()]);
    assert_eq!(code, OK);
    assert_eq!(v["entries"].as_array().unwrap().len(), 2);

    let id = proof("p => p");
    let with_cut = cut(id.clone(), id, &parse_formula("p").unwrap()).unwrap();
    let path = tmp("cut.json", &with_cut.to_json());
    let (code, v) = json(&["cutelim", path.to_str().unwrap()]);
    assert_eq!(code, OK);
    let e = load_derivation(&v).unwrap();
    assert!(e.is_cutfree());
    assert_eq!(e.conclusion, with_cut.conclusion);
}

#[test]
fn interpolate_json_and_preconditions() {
    let (code, v) = json(&["interpolate", "-v", "p || q ; ~p => ; q || r"]);
    assert_eq!(code, OK);
    assert_eq!(v["verified"], true);
    assert!(load_derivation(&v["left_derivation"]).is_ok());
    assert!(load_derivation(&v["right_derivation"]).is_ok());
    assert_eq!(gt(&["interpolate", "p || q ; => q || p ; "]).0, USAGE);
    assert_eq!(gt(&["interpolate", "p ; => ; q"]).0, INVALID);
}

#[test]
fn fuzz_agrees() {
    let (code, v) = json(&["--seed", "9", "fuzz", "--count", "40"]);
    assert_eq!(code, OK);
    assert_eq!(v["disagreements"].as_array().unwrap().len(), 0);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_gt");
    let out = Command::new(bin).args(["prove", "=> p || ~p"]).output().unwrap();
    assert_eq!(out.status.code(), Some(INVALID));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"team\""));
    let out = Command::new(bin).args(["valid", "p & q => p"]).output().unwrap();
    assert_eq!(out.status.code(), Some(OK));
}
