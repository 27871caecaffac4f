//! Group table parsing (including the algebraic validation behind it) must
//! never panic; accepted tables round-trip through the formatter.

#![no_main]

use hgkit::io::{format_group, parse_group};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_group(text) {
        let canonical = format_group(&g);
        let back = parse_group(&canonical).expect("formatter output must parse");
        assert_eq!(g.order(), back.order());
        for a in 0..g.order() {
            for b in 0..g.order() {
                assert_eq!(g.mul(a, b), back.mul(a, b));
            }
        }
    }
});
