#![no_main]

use hypolab::spectral::{from_coo, to_coo};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = from_coo(text) {
        let again = from_coo(&to_coo(&doc.matrix, &doc.basis)).expect("exported matrix parses");
        assert_eq!(again, doc);
    }
});
