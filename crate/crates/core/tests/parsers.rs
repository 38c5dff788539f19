//! Parser robustness: the checked-in fuzz corpus and random inputs must
//! never panic, and valid files must round-trip.

use std::fs;
use std::path::PathBuf;

use motion_factor::dualquat::DEFAULT_TOL;
use motion_factor::io;
use motion_factor::linkage::{export, ExportFormat, ExportOptions};
use motion_factor::Error;
use proptest::prelude::*;

fn run_parser(target: &str, s: &str) -> Option<Result<(), Error>> {
    Some(match target {
        "parse_real_poly" => io::parse_real_poly(s).map(drop),
        "parse_dqpoly" => io::parse_dqpoly(s).map(drop),
        "parse_motion" => io::parse_motion(s, DEFAULT_TOL).map(drop),
        "parse_quat_poly" => io::parse_quat_poly(s).map(drop),
        "parse_dual_quaternion" => io::parse_dual_quaternion(s).map(drop),
        "parse_poses" => io::parse_poses(s, DEFAULT_TOL).map(drop),
        "parse_curve" => io::parse_curve(s).map(drop),
        "parse_flip" => io::parse_flip(s).map(drop),
        "parse_linkage" => io::parse_linkage(s, DEFAULT_TOL).map(drop),
        "parse_report" => io::parse_report(s).map(drop),
        _ => return None,
    })
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus")
}

#[test]
fn corpus_replays_without_panics() {
    let mut seen = 0;
    for entry in fs::read_dir(corpus_dir()).expect("fuzz corpus") {
        let dir = entry.unwrap().path();
        let target = dir.file_name().unwrap().to_str().unwrap().to_string();
        for seed in fs::read_dir(&dir).unwrap() {
            let bytes = fs::read(seed.unwrap().path()).unwrap();
            let s = String::from_utf8_lossy(&bytes);
            assert!(run_parser(&target, &s).is_some(), "no parser named {target}");
            seen += 1;
        }
    }
    assert!(seen >= 30, "only {seen} corpus seeds");
}

#[test]
fn checked_in_examples_parse() {
    let dir = corpus_dir();
    let read = |t: &str, f: &str| fs::read_to_string(dir.join(t).join(f)).unwrap();
    assert!(io::parse_motion(&read("parse_motion", "seed_ellipse_2_1"), DEFAULT_TOL).is_ok());
    assert!(matches!(
        io::parse_motion(&read("parse_motion", "seed_bad_norm"), DEFAULT_TOL),
        Err(Error::NonRealNorm(_))
    ));
    assert!(matches!(
        io::parse_dqpoly(&read("parse_dqpoly", "seed_short")),
        Err(Error::Parse(_))
    ));
    let r = io::parse_report(&read("parse_report", "seed_multiplier")).unwrap();
    assert_eq!(r.factorizations[0].factors.len(), 4);
    assert!(io::parse_curve(&read("parse_curve", "seed_ellipse_curve")).is_ok());
}

#[test]
fn linkage_json_round_trips() {
    let text = fs::read_to_string(corpus_dir().join("parse_linkage/seed_ellipse")).unwrap();
    let l = io::parse_linkage(&text, DEFAULT_TOL).unwrap();
    let again = export(&l, ExportFormat::Json, &ExportOptions::default()).unwrap();
    assert_eq!(io::parse_linkage(&again, DEFAULT_TOL).unwrap(), l);
}

#[test]
fn oversized_and_non_finite_inputs_are_parse_errors() {
    let huge = format!("{{\"coeffs\": [{}]}}", vec!["1"; 1 << 21].join(","));
    assert!(matches!(io::parse_real_poly(&huge), Err(Error::Parse(_))));
    assert!(matches!(
        io::parse_real_poly("{\"coeffs\": [1e400]}"),
        Err(Error::Parse(_))
    ));
    assert!(matches!(
        io::parse_dual_quaternion("[1,0,0,0,0,0,0,NaN]"),
        Err(Error::Parse(_))
    ));
}

fn json_like() -> impl Strategy<Value = String> {
    let atom = prop_oneof![
        Just("0".to_string()),
        Just("1".to_string()),
        Just("-2.5".to_string()),
        Just("1e308".to_string()),
        Just("\"inf\"".to_string()),
        Just("null".to_string()),
        Just("\"L0\"".to_string()),
    ];
    atom.prop_recursive(4, 64, 9, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..9).prop_map(|v| format!("[{}]", v.join(","))),
            prop::collection::vec(
                (
                    prop::sample::select(vec![
                        "coeffs",
                        "v",
                        "w",
                        "m_prev",
                        "h",
                        "joints",
                        "links",
                        "loops",
                        "ground",
                        "id",
                        "generator",
                        "kind",
                        "status",
                        "factorizations",
                        "factors",
                        "multiplier",
                    ]),
                    inner
                ),
                0..5
            )
            .prop_map(|kv| {
                let body: Vec<String> = kv.iter().map(|(k, v)| format!("\"{k}\":{v}")).collect();
                format!("{{{}}}", body.join(","))
            }),
        ]
    })
}

const TARGETS: [&str; 10] = [
    "parse_real_poly",
    "parse_dqpoly",
    "parse_motion",
    "parse_quat_poly",
    "parse_dual_quaternion",
    "parse_poses",
    "parse_curve",
    "parse_flip",
    "parse_linkage",
    "parse_report",
];

proptest! {
    #[test]
    fn arbitrary_text_never_panics(s in ".{0,200}") {
        for t in TARGETS {
            let _ = run_parser(t, &s);
        }
    }

    #[test]
    fn structured_json_never_panics(s in json_like()) {
        for t in TARGETS {
            let _ = run_parser(t, &s);
        }
    }
}
