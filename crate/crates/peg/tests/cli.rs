use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], workers: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_peg"));
    cmd.args(args);
    if let Some(w) = workers {
        cmd.env("PEG_WORKERS", w);
    }
    cmd.output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args, None);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("peg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["rect", "find", "--n", "2"],
        vec!["obstruct", "torus"],
        vec!["rect", "find", "--curve", "preset:nope", "--n", "2"],
        vec!["rect", "find", "--curve", "preset:ellipse:2", "--n", "2"],
        vec!["rect", "find", "--curve", "/nonexistent/curve.json", "--n", "2"],
        vec!["rect", "sweep", "--curve", "preset:circle:1", "--n", "two"],
        vec!["obstruct", "torus", "--knot", "T(4;5)"],
        vec!["obstruct", "torus-even", "--p", "4", "--sign", "+"],
        vec!["obstruct", "torus-even", "--p", "3", "--sign", "x"],
        vec!["genus", "torus", "--n", "5", "--verify", "1,2,3"],
        vec!["genus", "torus", "--n", "5", "--verify", "1,2;3,4"],
        vec!["dinv", "--n", "0"],
        vec!["rect", "find", "--curve", "preset:lipschitz_perturbed_circle:1,0.7", "--n", "2"],
    ] {
        let out = run(&args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn preconditions_are_verdicts() {
    for (args, knot) in [
        (vec!["genus", "torus", "--n", "4"], "T(7,8)"),
        (vec!["obstruct", "two-bridge", "--p", "7"], "K(7/5)"),
        (vec!["obstruct", "smooth-torus", "--n", "2"], "T(4,5)"),
        (vec!["obstruct", "torus", "--knot", "T(4,9)"], "T(4,9)"),
    ] {
        let v = json(&args);
        assert_eq!(v["result"]["verdict"], "PreconditionFailed", "{args:?}");
        assert_eq!(v["result"]["knot"], knot);
    }
}

#[test]
fn verdicts_of_the_worked_examples() {
    assert_eq!(json(&["obstruct", "torus", "--knot", "T(4,5)"])["result"]["verdict"], "ObstructedTopological");
    let smooth = json(&["obstruct", "smooth-torus", "--n", "11"]);
    assert_eq!(smooth["result"]["verdict"], "ObstructedSmoothOnly");
    assert_eq!(smooth["result"]["evidence"]["d_generator"], "-173/46");
    assert_eq!(smooth["result"]["evidence"]["bound"], "11/46");
    let even = json(&["obstruct", "torus-even", "--p", "3", "--sign", "-", "--count", "1"]);
    assert_eq!(even["result"]["found"][0]["k"], 26);
    assert_eq!(even["result"]["found"][0]["report"]["evidence"]["determinant"].as_i64().unwrap().abs(), 155);
    assert_eq!(json(&["obstruct", "two-bridge", "--p", "15"])["result"]["verdict"], "ObstructedTopological");
}

#[test]
fn genus_replays_vectors() {
    let v = json(&["genus", "torus", "--n", "5", "--verify", "-1,-1,0,1;4,1,2,-4"]);
    let r = &v["result"];
    assert_eq!(r["smooth"], 4);
    assert_eq!(r["top_upper"], 3);
    assert_eq!(r["verify"]["valid"], true);
    assert_eq!(r["verify"]["certificate"]["aMa"], 0);
    assert_eq!(r["verify"]["certificate"]["aMb"], 0);
    assert_eq!(r["verify"]["certificate"]["bMa"], -1);
    assert_eq!(r["verify"]["certificate"]["alexander_coefficients"], serde_json::json!([0, 1, 0]));
    let bad = json(&["genus", "torus", "--n", "5", "--verify", "1,0,0,0;0,1,0,0"]);
    assert_eq!(bad["result"]["verify"]["valid"], false);
}

#[test]
fn rationals_are_strings() {
    let v = json(&["dinv", "--n", "11", "--table"]);
    let entries = v["result"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 23);
    for e in entries {
        let d = e["d"].as_str().unwrap();
        let (num, den) = d.split_once('/').unwrap();
        num.parse::<i64>().unwrap();
        den.parse::<u64>().unwrap();
    }
    assert!(entries.iter().any(|e| e["d"] == "1/2"));
}

#[test]
fn files_are_written() {
    let csv = scratch("dinv.csv");
    let out = scratch("dinv.json");
    let o = run(&["dinv", "--n", "3", "--csv", csv.to_str().unwrap(), "--out", out.to_str().unwrap()], None);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("j,d,eta1,eta2"));
    assert_eq!(text.lines().count(), 8);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["max_d"], "1/2");

    let svg = scratch("hits.svg");
    let o = run(
        &["rect", "find", "--curve", "preset:ellipse:2,1", "--samples", "800", "--grid", "256", "--n", "2", "--svg", svg.to_str().unwrap()],
        None,
    );
    assert!(o.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("viewBox=\"-2.2 -1.1 4.4 2.2") && text.contains("crimson"));
}

#[test]
fn curve_files_round_trip() {
    let path = scratch("square.csv");
    let mut text = String::from("x,y\n");
    for i in 0..64 {
        let t = i as f64 / 16.0;
        let (x, y) = match i / 16 {
            0 => (t, 0.0),
            1 => (1.0, t - 1.0),
            2 => (3.0 - t, 1.0),
            _ => (0.0, 4.0 - t),
        };
        text.push_str(&format!("{x},{y}\n"));
    }
    std::fs::write(&path, text).unwrap();
    let v = json(&["curve", "check", "--curve", path.to_str().unwrap(), "--epsilon", "0.1", "--r", "0.5"]);
    assert_eq!(v["result"]["vertices"], 64);
    assert_eq!(v["result"]["simple"], true);
    assert!((v["result"]["length"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert_eq!(v["result"]["chords"]["degree"].as_i64().unwrap().abs(), 1);
}

#[test]
fn output_ignores_worker_count() {
    let cases: [&[&str]; 3] = [
        &["obstruct", "torus-even", "--p", "3", "--sign", "+", "--count", "3"],
        &["rect", "sweep", "--curve", "preset:lipschitz_perturbed_circle:3,0.2", "--samples", "600", "--grid", "256", "--n", "2..4"],
        &["dinv", "--n", "7", "--table"],
    ];
    for args in cases {
        let one = run(args, Some("1"));
        let many = run(args, Some("4"));
        assert!(one.status.success() && many.status.success(), "{args:?}");
        assert_eq!(one.stdout, many.stdout, "{args:?}");
        assert_eq!(one.stdout, run(args, Some("1")).stdout, "{args:?}");
    }
}

#[test]
fn timing_is_opt_in() {
    let plain = json(&["obstruct", "torus", "--knot", "T(4,5)"]);
    assert!(plain.get("timing_ms").is_none());
    let timed = json(&["--timing", "obstruct", "torus", "--knot", "T(4,5)"]);
    assert!(timed["timing_ms"].as_f64().unwrap() >= 0.0);
    assert_eq!(plain["tool"], "peg");
    assert_eq!(plain["input"]["knot"], "T(4,5)");
}
