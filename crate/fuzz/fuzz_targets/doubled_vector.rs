#![no_main]

use libfuzzer_sys::fuzz_target;
use varbound::bounds::symmetric_schmidt;
use varbound::io::{doubled_vector_to_text, parse_doubled_vector};

fuzz_target!(|data: &str| {
    let Ok((v, m)) = parse_doubled_vector(data) else {
        return;
    };
    assert_eq!(v.len(), m * m);
    let (again, m2) = parse_doubled_vector(&doubled_vector_to_text(&v)).expect("written vectors parse");
    assert_eq!(m, m2);
    assert_eq!(v, again);
    // Validation errors are fine; panics are not.
    if m <= 16 {
        let _ = symmetric_schmidt(&v, m);
    }
});
