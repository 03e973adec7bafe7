#![no_main]

use hypolab::spectral::{FieldDoc, FieldSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&d, rest)) = data.split_first() else { return };
    let Ok(doc) = serde_json::from_slice::<FieldDoc>(rest) else { return };
    if let Ok(field) = FieldSpec::from_doc(2 + usize::from(d & 1), &doc) {
        let _ = field.bandwidth();
        let _ = field.eval(&vec![0.25; field.d()]);
    }
});
