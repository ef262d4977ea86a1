#![no_main]

use libfuzzer_sys::fuzz_target;
use varbound::io::{observables_to_json, parse_observables};

fuzz_target!(|data: &str| {
    let Ok(set) = parse_observables(data) else {
        return;
    };
    // Anything accepted must survive a write/read round trip unchanged.
    let text = observables_to_json(&set).expect("accepted sets serialize");
    let again = parse_observables(&text).expect("serialized sets parse");
    assert_eq!(again.len(), set.len());
    assert_eq!(again.dim(), set.dim());
    for (a, b) in set.iter().zip(again.iter()) {
        assert_eq!(a.label(), b.label());
        assert_eq!(a.entries(), b.entries());
    }
});
