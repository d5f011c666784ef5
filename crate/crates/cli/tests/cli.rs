use std::process::{Command, Output};

use serde_json::Value;
use seshadri_core::plot::parse_svg_vertices;
use seshadri_core::rational::{frac, q};
use seshadri_core::Polygon;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seshadri"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn class_arg(v: &Value) -> String {
    v["class"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect::<Vec<_>>()
        .join(",")
}

#[test]
fn body_json_round_trips_the_class() {
    let v = json(&["body", "--s", "6", "--class", "1,-2/5,..."]);
    let class = class_arg(&v);
    assert_eq!(class, "1,-2/5,-2/5,-2/5,-2/5,-2/5,-2/5");
    assert_eq!(
        v["polygon"]["vertices"],
        serde_json::json!([["0", "0"], ["1/25", "0"], ["0", "1"]])
    );
    let again = json(&["body", "--s", "6", "--class", &class]);
    assert_eq!(v, again);
}

#[test]
fn output_is_deterministic() {
    let cases: [&[&str]; 4] = [
        &[
            "okfun",
            "--s",
            "6",
            "--class",
            "1,-2/5,...",
            "--dmax",
            "5",
            "--tol",
            "1/64",
        ],
        &["seshadri", "--s", "9", "--class", "1,0,..."],
        &[
            "--seed",
            "11",
            "shgh",
            "-d",
            "10",
            "-m",
            "4,3,3,2,2",
            "--oracle",
        ],
        &[
            "walk",
            "--s",
            "3",
            "--class",
            "7,-1,-2,-3",
            "--direction",
            "0,-1,-1,-1",
        ],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn epsilon_values() {
    let v = json(&["seshadri", "--s", "7", "--class", "1,0,..."]);
    assert_eq!(v["status"], "exact");
    assert_eq!(v["value"], "3/8");
    assert_eq!(
        v["achieved_by"],
        serde_json::json!([3, -2, -1, -1, -1, -1, -1, -1])
    );
    let v = json(&["seshadri", "--s", "9", "--class", "1,0,..."]);
    assert_eq!(v["status"], "interval");
    let text = run(&["--format", "text", "mu", "--s", "5", "--class", "1,0,..."]);
    assert_eq!(
        String::from_utf8_lossy(&text.stdout).trim(),
        "mu = 1/2 via (2; 1, 1, 1, 1, 1)"
    );
}

#[test]
fn shgh_challenge_dimension() {
    let v = json(&["shgh", "-d", "22", "-m", "7,7,7,7,7,7,7,7,7", "--oracle"]);
    assert_eq!(v["predicted_dim"], 23);
    assert_eq!(v["oracle"]["dim"], 23);
    assert_eq!(v["special"], false);
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["catalog", "--s", "6", "--dmax", "2"]).status.code(),
        Some(0)
    );
    // Domain errors: not pseudo-effective, not big.
    assert_eq!(
        run(&["seshadri", "--s", "6", "--class", "1,-1,..."])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["body", "--s", "1", "--class", "0,-1"]).status.code(),
        Some(1)
    );
    // Usage errors.
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["body", "--s", "6"]).status.code(), Some(2));
    assert_eq!(
        run(&["--format", "svg", "shgh", "-d", "2", "-m", "2,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["body", "--s", "2", "--class", "1,-1/2,-1/2,-1/2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn fixtures_all_pass() {
    let v = json(&["fixtures", "--run", "all"]);
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() >= 13);
    assert_eq!(
        run(&["fixtures", "--run", "no-such-fixture"]).status.code(),
        Some(2)
    );
}

#[test]
fn svg_carries_exact_vertices() {
    let out = run(&["--format", "svg", "body", "--s", "1", "--class", "1,-1/2"]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    let polys = parse_svg_vertices(&svg).unwrap();
    let expected = Polygon::hull([
        (q(0), q(0)),
        (q(0), q(1)),
        (frac(1, 2), frac(1, 2)),
        (frac(1, 2), q(0)),
    ]);
    assert_eq!(polys, vec![expected]);

    let out = run(&[
        "--format",
        "svg",
        "okfun",
        "--s",
        "6",
        "--class",
        "1,-2/5,...",
        "--dmax",
        "5",
        "--tol",
        "1/32",
        "--omega",
    ]);
    let svg = String::from_utf8(out.stdout).unwrap();
    let polys = parse_svg_vertices(&svg).unwrap();
    assert!(polys.len() > 2);
    assert_eq!(
        polys.last().unwrap(),
        &seshadri_core::plot::six_point_omega()
    );
    assert!(svg.contains("data-lambda=\"0\"") && svg.contains("data-lambda=\"1/32\""));
}
