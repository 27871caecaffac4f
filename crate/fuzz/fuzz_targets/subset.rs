//! Subset line parsing against an arbitrary ambient order. The first byte
//! picks the order so id range checks get exercised on both sides.

#![no_main]

use hgkit::io::{format_subset, parse_subset};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&first, rest)) = data.split_first() else {
        return;
    };
    let order = usize::from(first) % 64 + 1;
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    if let Ok(s) = parse_subset(text, order) {
        let canonical = format_subset(&s);
        let back = parse_subset(&canonical, order).expect("formatter output must parse");
        assert_eq!(s.ids(), back.ids());
    }
});
