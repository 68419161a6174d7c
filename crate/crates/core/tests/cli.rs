use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gcoalg::manifolds::SurgeryPresentation;
use gcoalg::{Scalar, Uq};

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/examples").join(name)
}

fn gcoalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcoalg")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn hv_prime_round_trips_through_json() {
    let file = example("zero_framed_unknot.txt");
    let out = gcoalg(&["--ell", "4", "--json", "hvprime", file.to_str().unwrap(), "--cut", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let value: Scalar = serde_json::from_value(doc["value"].clone()).unwrap();
    let text = std::fs::read_to_string(&file).unwrap();
    let want = SurgeryPresentation::parse(&text).unwrap().hv_mod(&Uq::with_ell(4).unwrap(), 0).unwrap();
    assert_eq!(value, want.value);
    assert_eq!(doc["ell"], 4);
    assert_eq!(doc["cut_component"], 0);
}

#[test]
fn checks_pass_and_report_each_suite() {
    let out = gcoalg(&["--ell", "3", "--json", "check", "--suite", "ribbon", "--suite", "delta", "--samples", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let suites = doc["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 2);
    assert!(suites.iter().all(|s| s["status"] == "pass"));
}

#[test]
fn degenerate_twist_is_skipped_or_refused() {
    let out = gcoalg(&["--ell", "8", "--json", "check", "--suite", "delta"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["suites"][0]["status"], "skipped");
    let file = example("zero_framed_unknot.txt");
    let out = gcoalg(&["--ell", "8", "hv", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(gcoalg(&["--ell", "2", "check"]).status.code(), Some(2));
    assert_eq!(gcoalg(&["--ell", "13", "check"]).status.code(), Some(2));
    assert_eq!(gcoalg(&["integral", "--color", "x"]).status.code(), Some(2));
    assert_eq!(gcoalg(&["jinv", "/nonexistent/diagram.txt"]).status.code(), Some(2));
    let file = example("zero_framed_unknot.txt");
    assert_eq!(gcoalg(&["hvprime", file.to_str().unwrap(), "--cut", "3"]).status.code(), Some(2));
    assert_eq!(gcoalg(&["--tol", "0", "check"]).status.code(), Some(2));
}

#[test]
fn repcheck_agrees_on_the_trefoil() {
    let file = example("trefoil.txt");
    let out = gcoalg(&["--ell", "4", "--json", "repcheck", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["ok"], true);
}

#[test]
fn integral_tables_cover_the_basis() {
    let out = gcoalg(&["--ell", "4", "--json", "integral", "--color", "1/3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let rows = doc["rows"].as_array().unwrap();
    let nonzero = rows.iter().filter(|r| r["mu"]["re"].as_f64().unwrap().abs() > 1e-9 || r["mu"]["im"].as_f64().unwrap().abs() > 1e-9).count();
    assert_eq!(nonzero, 1);
    assert!(doc["z"].is_string());
}

#[test]
fn approximate_backend_matches_exact() {
    let file = example("zero_framed_unknot.txt");
    let f = file.to_str().unwrap();
    let exact = json(&gcoalg(&["--ell", "6", "--json", "hvprime", f, "--cut", "0"]));
    let approx = json(&gcoalg(&["--ell", "6", "--json", "--backend", "approx", "hvprime", f, "--cut", "0"]));
    for part in ["re", "im"] {
        assert!((exact["value"][part].as_f64().unwrap() - approx["value"][part].as_f64().unwrap()).abs() < 1e-8);
    }
}
