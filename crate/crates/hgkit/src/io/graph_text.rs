//! Plain-text bipartite graphs: a header line `u <U> v <V>` followed by one
//! `<u> <v>` pair per edge. Blank lines are skipped and `#` starts a comment
//! that runs to the end of the line.

use crate::bigraph::{build_graph, BipartiteGraph};
use crate::error::{Error, Result};

fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(idx, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((idx + 1, line))
        }
    })
}

fn parse_num(token: &str, line: usize, what: &str) -> Result<usize> {
    token.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad {what} {token:?}"),
    })
}

pub fn parse_graph(text: &str) -> Result<BipartiteGraph> {
    let mut sides: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = vec![];
    for (line, content) in significant_lines(text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match sides {
            None => {
                if tokens.len() != 4 || tokens[0] != "u" || tokens[2] != "v" {
                    return Err(Error::Parse {
                        line,
                        msg: format!("expected header `u <U> v <V>`, got {content:?}"),
                    });
                }
                let left = parse_num(tokens[1], line, "left size")?;
                let right = parse_num(tokens[3], line, "right size")?;
                if left == 0 || right == 0 {
                    return Err(Error::Parse {
                        line,
                        msg: "both sides must have at least one vertex".into(),
                    });
                }
                sides = Some((left, right));
            }
            Some((left, right)) => {
                if tokens.len() != 2 {
                    return Err(Error::Parse {
                        line,
                        msg: format!("expected `<u> <v>`, got {content:?}"),
                    });
                }
                let u = parse_num(tokens[0], line, "left id")?;
                let v = parse_num(tokens[1], line, "right id")?;
                if u >= left {
                    return Err(Error::Parse {
                        line,
                        msg: format!("left id {u} out of range for side of {left}"),
                    });
                }
                if v >= right {
                    return Err(Error::Parse {
                        line,
                        msg: format!("right id {v} out of range for side of {right}"),
                    });
                }
                edges.push((u, v));
            }
        }
    }
    let (left, right) = sides.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing header `u <U> v <V>`".into(),
    })?;
    Ok(build_graph(left, right, &edges).expect("ids validated line by line"))
}

/// Canonical rendering: header, then edges in row-major order.
pub fn format_graph(g: &BipartiteGraph) -> String {
    let mut out = format!("u {} v {}\n", g.left_size(), g.right_size());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
