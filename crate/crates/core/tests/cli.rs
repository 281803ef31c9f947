//! The `bellcorr` binary: output contents, determinism and exit codes.

use std::process::{Command, Output};

fn bellcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellcorr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn seesaw_named_states() {
    let singlet = bellcorr(&["seesaw", "--state", "singlet", "--restarts", "5"]);
    assert!(singlet.status.success());
    let beta = json(&singlet)["beta_lower"].as_f64().unwrap();
    assert!((beta - 2f64.sqrt()).abs() <= 1e-6, "{beta}");

    let mixed = bellcorr(&["seesaw", "--state", "maximally-mixed-2x2", "--restarts", "5"]);
    assert!(mixed.status.success());
    let beta = json(&mixed)["beta_lower"].as_f64().unwrap();
    assert!((beta - 1.0).abs() <= 1e-6, "{beta}");
}

#[test]
fn seesaw_is_byte_identical() {
    let args = ["seesaw", "--state", "werner:0.9", "--seed", "4", "--restarts", "6"];
    let a = bellcorr(&args);
    let b = bellcorr(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("werner.csv");
    let file = bellcorr(&[
        "separability",
        "--scenario",
        "werner",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(file.status.success());
    assert!(file.stdout.is_empty());
    let direct = bellcorr(&["separability", "--scenario", "werner", "--format", "csv"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    let text = stdout(&direct);
    let half = text.lines().find(|l| l.starts_with("5.0000000000000000e-1,")).unwrap();
    let fields: Vec<&str> = half.split(',').collect();
    let min_eig: f64 = fields[1].parse().unwrap();
    let beta: f64 = fields[3].parse().unwrap();
    assert!((min_eig + 0.125).abs() <= 1e-12);
    assert!((beta - 1.0).abs() <= 1e-12);
    assert_eq!(fields[2], "entangled");
}

#[test]
fn density_table() {
    let out = bellcorr(&["density", "--levels", "10", "--n-max", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,value,bound,dist,branch"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0][2].starts_with("1.20710678"));
    for row in &rows {
        let n: f64 = row[0].parse().unwrap();
        let value: f64 = row[1].parse().unwrap();
        let bound: f64 = row[2].parse().unwrap();
        let dist: f64 = row[3].parse().unwrap();
        assert!(value >= bound - 1e-10);
        assert!(dist <= (2.0 / n).sqrt() + 1e-10);
    }
}

#[test]
fn density_rejects_annihilated_vector() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    // e3 ⊗ e0 on C^8 ⊗ C^8 lies inside E_2
    let mut entries = vec![[0.0, 0.0]; 64];
    entries[24] = [1.0, 0.0];
    std::fs::write(&path, serde_json::to_string(&entries).unwrap()).unwrap();
    let out = bellcorr(&["density", "--levels", "8", "--n-max", "3", "--x", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("annihilates"));
}

#[test]
fn identity_suite_passes_and_reports_every_dimension() {
    let out = bellcorr(&["identity-suite", "--trials", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let report = json(&out);
    assert_eq!(report["status"], "pass");
    let dims: std::collections::BTreeSet<u64> = report["residuals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims.into_iter().collect::<Vec<_>>(), vec![4, 8, 16, 36]);
}

#[test]
fn injected_fault_exits_one() {
    let out = bellcorr(&["identity-suite", "--trials", "3", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["status"], "fail");
    assert!(report["failure"]["error"].as_str().unwrap().contains("not nilpotent"));
    assert!(report["failure"]["v"]["entries"].is_array());
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(bellcorr(&["density", "--levels", "4"]).status.code(), Some(2));
    assert_eq!(bellcorr(&["density", "--levels", "8", "--n-max", "6"]).status.code(), Some(2));
    assert_eq!(bellcorr(&["seesaw", "--dims", "2by2"]).status.code(), Some(2));
    assert_eq!(bellcorr(&["seesaw", "--state", "no-such-file.json"]).status.code(), Some(2));
    assert_eq!(bellcorr(&["seesaw", "--tol", "made-up=1"]).status.code(), Some(2));
    assert_eq!(bellcorr(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn steering_and_pushforward_reports() {
    let steer = bellcorr(&["separability", "--scenario", "steer", "--restarts", "8"]);
    assert!(steer.status.success());
    let report = json(&steer);
    assert_eq!(report["cyclic"], true);
    assert!(report["beta_after"].as_f64().unwrap() >= 2f64.sqrt() - 1e-6);

    let push = bellcorr(&["separability", "--scenario", "pushforward", "--trials", "30"]);
    assert!(push.status.success());
    assert!(json(&push)["max_mismatch"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn schlieder_reports() {
    let tensor = json(&bellcorr(&["schlieder", "--dims", "3x3"]));
    assert_eq!(tensor["holds"], true);
    assert_eq!(tensor["certainty"], "exact");
    let search = json(&bellcorr(&["schlieder", "--dims", "3x3", "--mode", "search", "--trials", "200"]));
    assert_eq!(search["holds"], true);
    assert_eq!(search["certainty"], "heuristic");
    let abelian = json(&bellcorr(&["schlieder", "--pair", "abelian"]));
    assert_eq!(abelian["holds"], false);
    assert_eq!(abelian["witness"]["norm_ab"].as_f64(), Some(0.0));
}
