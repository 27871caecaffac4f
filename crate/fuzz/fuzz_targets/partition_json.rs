//! Partition JSON decoding against a fixed ambient graph: parsing and the
//! structural validation behind it must never panic, and accepted
//! partitions round-trip through the formatter.

#![no_main]

use hgkit::gen::gen_canonical_halfgraph;
use hgkit::io::{format_partition, parse_partition};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let g = gen_canonical_halfgraph(6);
    if let Ok(p) = parse_partition(text, &g) {
        let canonical = format_partition(&p);
        let back = parse_partition(&canonical, &g).expect("formatter output must parse");
        let ids = |parts: &[hgkit::bigraph::VertexSet]| -> Vec<Vec<usize>> {
            parts.iter().map(|v| v.ids()).collect()
        };
        assert_eq!(ids(&back.left_parts), ids(&p.left_parts));
        assert_eq!(ids(&back.right_parts), ids(&p.right_parts));
    }
});
