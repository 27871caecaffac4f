//! Tree JSON decoding must never panic or over-allocate on hostile input.
//! File references are disabled (no base directory), so the target stays
//! filesystem-free. Accepted trees round-trip through the formatter.

#![no_main]

use hgkit::io::{format_tree, parse_tree};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = parse_tree(text, None) {
        let canonical = format_tree(&t);
        let back = parse_tree(&canonical, None).expect("formatter output must parse");
        assert_eq!(back.height(), t.height());
        assert_eq!(back.node_elems(), t.node_elems());
        assert_eq!(back.branch_elems(), t.branch_elems());
        assert_eq!(back.relation(), t.relation());
    }
});
