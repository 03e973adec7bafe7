#![no_main]

use hypolab::exact::CQ;
use hypolab::weyl::json::{polydiffop_from_json, polydiffop_to_json};
use hypolab::weyl::PolyDiffOp;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(op) = polydiffop_from_json::<CQ>(text) {
        let again: PolyDiffOp = polydiffop_from_json(&polydiffop_to_json(&op)).unwrap();
        assert!(again == op);
    }
});
