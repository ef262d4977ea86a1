//! Replays the checked-in fuzz seeds through the parsers with the same
//! round-trip assertions the fuzz targets make.

use std::fs;
use std::path::PathBuf;

use varbound::bounds::symmetric_schmidt;
use varbound::io::{doubled_vector_to_text, observables_to_json, parse_doubled_vector, parse_observables, parse_symmetry_hints};
use varbound::operator::SpinMatrices;

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn observables_seeds_round_trip() {
    let mut accepted = 0;
    for (path, text) in seeds("observables") {
        let Ok(set) = parse_observables(&text) else { continue };
        accepted += 1;
        let again = parse_observables(&observables_to_json(&set).unwrap()).unwrap();
        assert_eq!(again.len(), set.len(), "{}", path.display());
        for (a, b) in set.iter().zip(again.iter()) {
            assert_eq!(a.entries(), b.entries());
        }
    }
    assert!(accepted >= 2);
}

#[test]
fn doubled_vector_seeds_round_trip() {
    let mut accepted = 0;
    for (path, text) in seeds("doubled_vector") {
        let Ok((v, m)) = parse_doubled_vector(&text) else { continue };
        accepted += 1;
        let (again, m2) = parse_doubled_vector(&doubled_vector_to_text(&v)).unwrap();
        assert_eq!((m, &v), (m2, &again), "{}", path.display());
        let _ = symmetric_schmidt(&v, m);
    }
    assert!(accepted >= 2);
}

#[test]
fn symmetry_hint_seeds_resolve_without_panics() {
    let set = SpinMatrices::new(1.0).unwrap().xz_set().unwrap();
    let mut verified = 0;
    for (_, text) in seeds("symmetry_hints") {
        let Ok(hints) = parse_symmetry_hints(&text) else { continue };
        verified += hints.iter().filter_map(|h| h.resolve(&set).ok()).filter(|h| h.is_verified()).count();
    }
    assert!(verified >= 3);
}
