use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use motion_factor::dualquat::{DualQuaternion, Quaternion};
use motion_factor::io;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn motfact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motfact"))
        .args(args)
        .env_remove("MOTFACT_CONFIG")
        .output()
        .expect("run motfact")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_reports_ellipse_as_bounded_and_non_generic() {
    let out = motfact(&["validate", path(&data("ellipse_2_1.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["bounded"], true);
    assert_eq!(v["generic"], false);
    assert_eq!(v["primal_real_factor"]["coeffs"], serde_json::json!([1.0, 0.0, 1.0]));
}

#[test]
fn validate_reports_translation_as_unbounded() {
    let out = motfact(&["validate", path(&data("translation_line.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["bounded"], false);
    assert_eq!(v["norm"]["coeffs"], serde_json::json!([0.0, 0.0, 1.0]));
}

#[test]
fn malformed_input_exits_two() {
    let out = motfact(&["validate", path(&data("malformed.json"))]);
    assert_eq!(out.status.code(), Some(2));
    let out = motfact(&["validate", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = motfact(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_motion_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    // dual part t with primal 1 + t: the norm has a dual part
    std::fs::write(&f, r#"{"coeffs": [[1,0,0,0,0,0,0,0],[1,0,0,0,1,0,0,0]]}"#).unwrap();
    let out = motfact(&["validate", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["valid"], false);
    assert_eq!(v["error"], "NonRealNorm");
}

#[test]
fn generic_quadratic_has_two_factorizations() {
    for extra in [&[][..], &["--all"][..]] {
        let mut args = vec!["factor", "--tol", "1e-9"];
        let p = data("generic_quadratic.json");
        args.push(path(&p));
        args.extend_from_slice(extra);
        let out = motfact(&args);
        assert_eq!(out.status.code(), Some(0), "{extra:?}");
        let text = String::from_utf8(out.stdout.clone()).unwrap();
        let report = io::parse_report(&text).unwrap();
        assert_eq!(report.factorizations.len(), 2);
        let c = io::parse_dqpoly(&std::fs::read_to_string(&p).unwrap()).unwrap();
        for f in &report.factorizations {
            assert!(f.residual(&c) < 1e-8);
        }
    }
}

#[test]
fn ellipse_needs_a_multiplier() {
    let out = motfact(&["factor", path(&data("ellipse_2_1.json"))]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "NoFactorization");

    let out = motfact(&["factor", path(&data("ellipse_2_1.json")), "--multiplier-deg", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "Success");
    assert_eq!(v["multiplier"], serde_json::json!([1.0, 0.0, 1.0]));
    assert_eq!(v["factorizations"][0]["factors"].as_array().unwrap().len(), 4);
}

#[test]
fn right_multiplication_by_quaternion_polynomial() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.json");
    std::fs::write(&h, r#"{"coeffs": [[1,0,0,0],[0,0,0,0],[1,0,0,0]]}"#).unwrap();
    let out = motfact(&[
        "factor",
        path(&data("ellipse_2_1.json")),
        "--right-H",
        h.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["factorizations"][0]["factors"].as_array().unwrap().len(), 4);
}

#[test]
fn synth3_builds_a_bennett_linkage() {
    let dir = tempfile::tempdir().unwrap();
    let poses = dir.path().join("poses.json");
    let p = [
        DualQuaternion::from_rotation_translation(Quaternion::new(1.0, 0.0, 0.0, 0.0), [0.0; 3]),
        DualQuaternion::from_rotation_translation(Quaternion::new(0.8, 0.6, 0.0, 0.0), [1.0, 0.5, -0.2]),
        DualQuaternion::from_rotation_translation(Quaternion::new(0.6, 0.0, 0.48, 0.64), [-0.3, 2.0, 0.7]),
    ];
    let arrays: Vec<[f64; 8]> = p.iter().map(|h| h.to_array()).collect();
    std::fs::write(&poses, serde_json::to_string(&arrays).unwrap()).unwrap();
    let out_dir = dir.path().join("out");
    let out = motfact(&["synth3", poses.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    let l = io::parse_linkage(&text, 1e-9).unwrap();
    assert_eq!(l.joints.len(), 4);
    assert_eq!(l.links.len(), 4);
    assert!(out_dir.join("linkage.json").exists());
}

#[test]
fn synth3_rejects_degenerate_poses() {
    let out = motfact(&["synth3", path(&data("identical_poses.json"))]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "DegeneratePoses");
    let out = motfact(&["synth3", path(&data("off_quadric_poses.json"))]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "NotOnStudyQuadric");
}

#[test]
fn flip_satisfies_the_identity() {
    let out = motfact(&["flip", path(&data("flip.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let k: DualQuaternion = serde_json::from_value(v["k"].clone()).unwrap();
    let m: DualQuaternion = serde_json::from_value(v["m"].clone()).unwrap();
    let (m_prev, h) = io::parse_flip(&std::fs::read_to_string(data("flip.json")).unwrap()).unwrap();
    let lhs = motion_factor::DQPoly::from_linear_factors(&[m_prev, h]);
    let rhs = motion_factor::DQPoly::from_linear_factors(&[k, m]);
    assert!(lhs.distance(&rhs) < 1e-9);
}

#[test]
fn ellipse_curve_yields_linkage_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = motfact(&[
        "curve",
        path(&data("ellipse_curve.json")),
        "--export",
        "svg",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["multiplier"]["coeffs"], serde_json::json!([1.0, 0.0, 1.0]));
    assert_eq!(v["cells"].as_array().unwrap().len(), 4);
    let svg = std::fs::read_to_string(dir.path().join("tracer.svg")).unwrap();
    assert!(svg.contains("id=\"tracer\""));
    let l = io::parse_linkage(&std::fs::read_to_string(dir.path().join("linkage.json")).unwrap(), 1e-9).unwrap();
    assert!(l.tracer.is_some());

    let out = motfact(&["sample", dir.path().join("linkage.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let s = json(&out);
    assert_eq!(s["samples"].as_array().unwrap().len(), 25);
    assert!(s["rigidity"]["max_deviation"].as_f64().unwrap() < 1e-7);
}

#[test]
fn circle_curve_needs_no_multiplier() {
    let out = motfact(&["curve", path(&data("circle_curve.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["multiplier"]["coeffs"], serde_json::json!([1.0]));
}

#[test]
fn curve_with_real_pole_exits_one() {
    let out = motfact(&["curve", path(&data("unbounded_curve.json"))]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "UnboundedCurve");
}

#[test]
fn explicit_m0_and_csv_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = motfact(&[
        "curve",
        path(&data("circle_curve.json")),
        "--m0",
        "[1,0,0,2,0,0,0,0]",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let linkage = dir.path().join("linkage.json");
    let out = motfact(&["--samples", "4", "export", linkage.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,joint_id,x,y,z"));
    assert_eq!(lines.filter(|l| l.contains(",tracer,")).count(), 4);
}

#[test]
fn sample_accepts_infinity() {
    let dir = tempfile::tempdir().unwrap();
    let out = motfact(&[
        "curve",
        path(&data("circle_curve.json")),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let linkage = dir.path().join("linkage.json");
    let out = motfact(&["sample", linkage.to_str().unwrap(), "--t=-1,inf"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["samples"][1]["t"], "inf");
    let out = motfact(&["sample", linkage.to_str().unwrap(), "--t", "abc"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("motfact.toml");
    std::fs::write(&cfg, "backtrack_budget = 0\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_motfact"))
        .args(["flip", path(&data("flip.json"))])
        .env("MOTFACT_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&cfg, "sample_count = 3\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_motfact"))
        .args([
            "curve",
            path(&data("circle_curve.json")),
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .env("MOTFACT_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_motfact"))
        .args(["sample", dir.path().join("linkage.json").to_str().unwrap()])
        .env("MOTFACT_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(json(&out)["samples"].as_array().unwrap().len(), 3);
}

#[test]
fn output_is_deterministic() {
    let run = || {
        motfact(&[
            "factor",
            path(&data("ellipse_2_1.json")),
            "--multiplier-deg",
            "2",
            "--seed",
            "7",
        ])
        .stdout
    };
    assert_eq!(run(), run());
}
