//! Pattern trees as JSON documents:
//!
//! ```json
//! {
//!   "height": 2,
//!   "nodes": { "": 0, "0": 1, "1": 2 },
//!   "branches": { "00": 0, "01": 1, "10": 2, "11": 3 },
//!   "relation": { "left": 4, "right": 3, "edges": [[0, 0], ...] }
//! }
//! ```
//!
//! Node keys are root paths (the root is the empty string, strictly shorter
//! than the height); branch keys have length exactly the height. The
//! relation is either inline or `{ "graph_file": "path" }` resolved against
//! a caller-supplied base directory.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bigraph::build_graph;
use crate::error::{Error, Result};
use crate::io::graph_text::parse_graph;
use crate::tree::{bits_to_pos, pos_to_bits, PhiTree};

#[derive(Debug, Serialize, Deserialize)]
pub struct TreeDoc {
    pub height: usize,
    pub nodes: BTreeMap<String, usize>,
    pub branches: BTreeMap<String, usize>,
    pub relation: RelationDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RelationDoc {
    File {
        graph_file: String,
    },
    Inline {
        left: usize,
        right: usize,
        edges: Vec<(usize, usize)>,
    },
}

/// Heights beyond this would allocate gigabyte-scale tables; documents that
/// large are rejected before any allocation happens.
pub const MAX_TREE_HEIGHT: usize = 24;

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    }
}

pub fn parse_tree_doc(text: &str) -> Result<TreeDoc> {
    serde_json::from_str(text).map_err(json_err)
}

/// Assembles a validated tree from a parsed document. `base_dir` anchors
/// `graph_file` references; passing `None` rejects them, which keeps the
/// parser free of filesystem access when that matters.
pub fn tree_from_doc(doc: &TreeDoc, base_dir: Option<&Path>) -> Result<PhiTree> {
    let h = doc.height;
    if !(1..=MAX_TREE_HEIGHT).contains(&h) {
        return Err(Error::Parse {
            line: 0,
            msg: format!("height must lie in 1..={MAX_TREE_HEIGHT}, got {h}"),
        });
    }
    let node_slots = 1usize << h;
    if doc.nodes.len() != node_slots - 1 {
        return Err(Error::MissingEntry(format!(
            "height {h} needs {} node entries, got {}",
            node_slots - 1,
            doc.nodes.len()
        )));
    }
    if doc.branches.len() != node_slots {
        return Err(Error::MissingEntry(format!(
            "height {h} needs {node_slots} branch entries, got {}",
            doc.branches.len()
        )));
    }

    let mut node_elem = vec![0usize; node_slots];
    for (key, &elem) in &doc.nodes {
        if key.len() >= h {
            return Err(Error::Parse {
                line: 0,
                msg: format!("node key {key:?} is too deep for height {h}"),
            });
        }
        node_elem[bits_to_pos(key)?] = elem;
    }

    let mut branch_elem = vec![0usize; node_slots];
    for (key, &elem) in &doc.branches {
        if key.len() != h {
            return Err(Error::Parse {
                line: 0,
                msg: format!("branch key {key:?} must have length {h}"),
            });
        }
        branch_elem[bits_to_pos(key)? - node_slots] = elem;
    }

    let relation = match &doc.relation {
        RelationDoc::Inline { left, right, edges } => build_graph(*left, *right, edges)?,
        RelationDoc::File { graph_file } => {
            let dir = base_dir.ok_or_else(|| {
                Error::Io("graph_file references are not allowed in this context".into())
            })?;
            let path = dir.join(graph_file);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            parse_graph(&text)?
        }
    };
    PhiTree::new(h, branch_elem, node_elem, relation)
}

pub fn parse_tree(text: &str, base_dir: Option<&Path>) -> Result<PhiTree> {
    tree_from_doc(&parse_tree_doc(text)?, base_dir)
}

/// Canonical rendering with the relation inlined; keys sort lexicographically.
pub fn format_tree(t: &PhiTree) -> String {
    let h = t.height();
    let nodes: BTreeMap<String, usize> = (1..t.node_end())
        .map(|pos| (pos_to_bits(pos), t.node_elem(pos)))
        .collect();
    let branches: BTreeMap<String, usize> = (0..t.branch_count())
        .map(|o| (pos_to_bits((1 << h) + o), t.branch_elem(o)))
        .collect();
    let g = t.relation();
    let doc = TreeDoc {
        height: h,
        nodes,
        branches,
        relation: RelationDoc::Inline {
            left: g.left_size(),
            right: g.right_size(),
            edges: g.edges(),
        },
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("tree docs always serialize");
    out.push('\n');
    out
}
