use std::path::PathBuf;

use varbound::bounds::{full_bound, prop2_bound, BoundOptions, Method};
use varbound::io::{load_observables, load_symmetry_hints, write_atomic};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

#[test]
fn file_to_interval_with_rotation_hint() {
    let set = load_observables(data("xz_spin1.json")).unwrap();
    let hints = load_symmetry_hints(data("xz_spin1_hint.json"), &set).unwrap();
    assert!(hints.iter().all(|h| h.is_verified()));
    let report = full_bound(&set, &BoundOptions::default(), &hints).unwrap();
    assert!(report.is_consistent(1e-9));
    assert_eq!(report.method, Method::Prop3);
    assert!((report.lower - 0.381966).abs() < 1e-6);
    // At j = 1 the ground vector is far from a product (λ_Max ≈ 0.8507) and
    // its leading factor is a poor witness.
    assert!((report.lambda_max.unwrap() - 0.8506508).abs() < 1e-6);
    assert!((report.upper.unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn report_json_written_atomically() {
    let set = load_observables(data("su3.json")).unwrap();
    let report = prop2_bound(&set, &BoundOptions::default()).unwrap();
    assert!(report.set_restricted);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    write_atomic(&path, report.to_json().unwrap().as_bytes()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["method"], "prop2");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn hint_for_another_set_is_not_verified() {
    let set = load_observables(data("su3.json")).unwrap();
    let hints = load_symmetry_hints(data("xz_spin1_hint.json"), &set).unwrap();
    assert!(hints.iter().all(|h| !h.is_verified()));
}
