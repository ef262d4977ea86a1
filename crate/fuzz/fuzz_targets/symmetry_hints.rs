#![no_main]

use libfuzzer_sys::fuzz_target;
use varbound::io::parse_symmetry_hints;
use varbound::operator::SpinMatrices;

fuzz_target!(|data: &str| {
    let Ok(hints) = parse_symmetry_hints(data) else {
        return;
    };
    let set = SpinMatrices::new(1.0).and_then(|s| s.xz_set()).expect("spin-1 pair");
    for hint in hints.iter().take(4) {
        let _ = hint.resolve(&set);
    }
});
