//! Graph text parsing must never panic, and accepted inputs must survive a
//! format/parse round trip unchanged.

#![no_main]

use hgkit::io::{format_graph, parse_graph};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_graph(text) {
        let canonical = format_graph(&g);
        let back = parse_graph(&canonical).expect("formatter output must parse");
        assert_eq!(g, back);
        assert_eq!(format_graph(&back), canonical);
    }
});
