#![no_main]

use hypolab::lie::json::{enveloping_from_json, enveloping_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = enveloping_from_json(text) {
        assert_eq!(enveloping_from_json(&enveloping_to_json(&p)).unwrap(), p);
    }
});
