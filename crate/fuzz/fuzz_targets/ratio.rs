//! Rational parsing must never panic (including division-by-zero and huge
//! numerals); accepted values round-trip through the formatter.

#![no_main]

use hgkit::ratio::{format_ratio, parse_ratio};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = parse_ratio(text) {
        let canonical = format_ratio(&r);
        let back = parse_ratio(&canonical).expect("formatter output must parse");
        assert_eq!(back, r);
    }
});
