use std::fs;
use std::path::Path;
use std::process::Command;

use ubst::scenario::{builtin_example, Scenario};

fn ubst(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ubst")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn scenario_file_reproduces_example_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    let out = ubst(&["--example", "3", "--h", "1e-4", "--stride", "10", "--out", path(&first)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let scenario = first.join("example3.scenario.json");
    let out = ubst(&["--scenario", path(&scenario), "--out", path(&second)]);
    assert_eq!(out.status.code(), Some(0));
    let a = fs::read(first.join("example3.csv")).unwrap();
    let b = fs::read(second.join("example3.csv")).unwrap();
    assert!(a == b, "CSV differs between example and its scenario file");

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(first.join("example3.report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert!(report["settling"]["settle_time"].as_f64().unwrap() <= 1.0);
    let header = String::from_utf8(a).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "t,x1,x2,kappa,y,dy_true,z0,z1");
}

#[test]
fn bad_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"name": "x"}"#).unwrap();
    let out = ubst(&["--scenario", path(&bad), "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));

    let mut s = builtin_example(3, false).unwrap();
    s.bound = 0.5;
    fs::write(&bad, s.to_json().unwrap()).unwrap();
    let out = ubst(&["--scenario", path(&bad), "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2), "disturbance above the bound is an input error");

    assert_eq!(ubst(&["--example", "1", "--scenario", path(&bad)]).status.code(), Some(2));
    assert_eq!(ubst(&["--h", "-1", "--example", "3"]).status.code(), Some(2));
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = ubst(&["--verify", "decay", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().all(|l| l.starts_with("PASS ")) && stdout.lines().count() == 2);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify_decay.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn batch_differentiation_of_a_parabola() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("parabola.csv");
    let mut text = String::from("t,y\n");
    for k in 0..=3000 {
        let t = k as f64 * 1e-3;
        text.push_str(&format!("{t},{}\n", 0.5 * t * t));
    }
    fs::write(&input, text).unwrap();
    let out = ubst(&["--differentiate", path(&input), "--h", "1e-4", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("parabola.diff.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,z0,z1,kappa"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3001);
    // Sampling acts like measurement noise that κ amplifies near T_c, so the
    // estimate converges after the terminal stage catches up. Sampled-data
    // accuracy is O(L Δt) for z0 and O(L √Δt) for z1.
    for row in rows.iter().filter(|r| r[0] >= 2.0) {
        let t = row[0];
        assert!((row[1] - 0.5 * t * t).abs() < 1e-2, "z0 {} at t {t}", row[1]);
        assert!((row[2] - t).abs() < 0.1, "z1 {} at t {t}", row[2]);
    }
}

#[test]
fn start_time_only_shifts_the_clock() {
    let base: Scenario = {
        let mut s = builtin_example(3, false).unwrap();
        s.differentiator = None;
        s.disturbance = ubst::sim::DisturbanceSignal::Zero;
        s.step.h = 1e-4;
        s.horizon = 2.0;
        s.output_stride = 10;
        s.t_max_star = None;
        s
    };
    let mut shifted = base.clone();
    shifted.t0 = 7.25;
    let a = base.run().unwrap();
    let b = shifted.run().unwrap();
    assert_eq!(a.trajectory.states, b.trajectory.states);
    assert_eq!(a.trajectory.gains, b.trajectory.gains);
    let (sa, sb) = (a.report.settling.settle_time.unwrap(), b.report.settling.settle_time.unwrap());
    assert!((sb - sa - 7.25).abs() < 1e-12);
    assert!(a.report.pass && b.report.pass);
}
