use std::path::PathBuf;

use hypolab::exact::{parse_q, CQ};
use hypolab::lie::json::{algebra_from_json, enveloping_from_json};
use hypolab::spectral::{from_coo, FieldDoc, FieldSpec};
use hypolab::weyl::json::polydiffop_from_json;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(bytes: &[u8]) -> &str {
    std::str::from_utf8(bytes).unwrap()
}

#[test]
fn seeds_decode() {
    for (name, s) in seeds("algebra_json") {
        assert!(algebra_from_json(text(&s)).is_ok(), "{name}");
    }
    for (name, s) in seeds("enveloping_json") {
        assert!(enveloping_from_json(text(&s)).is_ok(), "{name}");
    }
    for (name, s) in seeds("polydiffop_json") {
        assert!(polydiffop_from_json::<CQ>(text(&s)).is_ok(), "{name}");
    }
    for (name, s) in seeds("coo_matrix") {
        assert!(from_coo(text(&s)).is_ok(), "{name}");
    }
    for (name, s) in seeds("field_json") {
        let doc: FieldDoc = serde_json::from_slice(&s[1..]).unwrap();
        assert!(FieldSpec::from_doc(2 + usize::from(s[0] & 1), &doc).is_ok(), "{name}");
    }
    for (name, s) in seeds("rational") {
        assert_eq!(parse_q(text(&s)).is_ok(), name != "decimal", "{name}");
    }
}
