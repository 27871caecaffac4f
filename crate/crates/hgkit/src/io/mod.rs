//! Text and JSON formats for graphs, groups, trees, and partitions.
//!
//! Every parser works on in-memory text and reports `Parse` errors with
//! 1-based line numbers where the format allows it; writers emit canonical
//! renderings that round-trip through the matching parser.

pub mod graph_text;
pub mod group_text;
pub mod partition_json;
pub mod tree_json;

pub use graph_text::{format_graph, parse_graph};
pub use group_text::{format_group, format_subset, parse_group, parse_subset};
pub use partition_json::{format_partition, parse_partition};
pub use tree_json::{format_tree, parse_tree};
