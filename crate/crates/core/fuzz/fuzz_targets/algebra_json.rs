#![no_main]

use hypolab::lie::json::{algebra_from_json, algebra_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = algebra_from_json(text) {
        let again = algebra_from_json(&algebra_to_json(&g)).expect("re-encoded algebra parses");
        assert_eq!(again, g);
    }
});
