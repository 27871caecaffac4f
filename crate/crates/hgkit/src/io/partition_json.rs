//! Two-sided partitions as JSON: `{ "left": [[ids]...], "right": [[ids]...] }`
//! with index 0 holding the (possibly empty) exceptional part.

use serde::{Deserialize, Serialize};

use crate::bigraph::BipartiteGraph;
use crate::error::{Error, Result};
use crate::regularity::RegularityPartition;

#[derive(Debug, Serialize, Deserialize)]
struct PartitionDoc {
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
}

/// Parses a partition document against the graph it will be checked on.
/// Structural faults (overlap, coverage gaps) are caught later by
/// `check_partition`; this step only binds ids to the graph's sides.
pub fn parse_partition(text: &str, g: &BipartiteGraph) -> Result<RegularityPartition> {
    let doc: PartitionDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    RegularityPartition::from_ids(g, &doc.left, &doc.right)
}

pub fn format_partition(p: &RegularityPartition) -> String {
    let doc = PartitionDoc {
        left: p.left_parts.iter().map(|s| s.ids()).collect(),
        right: p.right_parts.iter().map(|s| s.ids()).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("partition docs always serialize");
    out.push('\n');
    out
}
