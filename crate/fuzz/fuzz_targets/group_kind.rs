//! Group family expressions: the recursive-descent parser must never panic
//! or recurse without bound, and accepted expressions round-trip through
//! Display.

#![no_main]

use hgkit::gen::parse_group_kind;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(kind) = parse_group_kind(text) {
        let canonical = kind.to_string();
        let back = parse_group_kind(&canonical).expect("display output must parse");
        assert_eq!(back.to_string(), canonical);
    }
});
