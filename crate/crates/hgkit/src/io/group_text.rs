//! Group tables as text: `order <n>` followed by `n` rows of `n` element
//! ids. Subsets as a single `subset <comma-separated ids>` line. Both
//! formats skip blank lines and `#` comments.

use crate::error::{Error, Result};
use crate::group::{validate_group, FiniteGroup, GroupSubset};

fn significant_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .filter_map(|(idx, raw)| {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                None
            } else {
                Some((idx + 1, line))
            }
        })
        .collect()
}

pub fn parse_group(text: &str) -> Result<FiniteGroup> {
    let lines = significant_lines(text);
    let Some(&(header_line, header)) = lines.first() else {
        return Err(Error::Parse {
            line: 0,
            msg: "missing header `order <n>`".into(),
        });
    };
    let order: usize = header
        .strip_prefix("order")
        .map(str::trim)
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| Error::Parse {
            line: header_line,
            msg: format!("expected header `order <n>`, got {header:?}"),
        })?;
    if order == 0 {
        return Err(Error::Parse {
            line: header_line,
            msg: "group order must be at least 1".into(),
        });
    }
    let rows = &lines[1..];
    if rows.len() != order {
        return Err(Error::Parse {
            line: rows.last().map_or(header_line, |&(l, _)| l),
            msg: format!("expected {order} table rows, got {}", rows.len()),
        });
    }
    let mut table = Vec::with_capacity(order);
    for &(line, content) in rows {
        let row: Vec<usize> = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .ok()
                    .filter(|&x| x < order)
                    .ok_or_else(|| Error::Parse {
                        line,
                        msg: format!("bad element id {tok:?} (order is {order})"),
                    })
            })
            .collect::<Result<_>>()?;
        if row.len() != order {
            return Err(Error::Parse {
                line,
                msg: format!("expected {order} ids in the row, got {}", row.len()),
            });
        }
        table.push(row);
    }
    validate_group(&table)
}

pub fn format_group(g: &FiniteGroup) -> String {
    let n = g.order();
    let mut out = format!("order {n}\n");
    for a in 0..n {
        let row: Vec<String> = (0..n).map(|b| g.mul(a, b).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a `subset <ids>` line against a group of the given order. The id
/// list is comma-separated and may be empty (`subset` alone).
pub fn parse_subset(text: &str, order: usize) -> Result<GroupSubset> {
    let lines = significant_lines(text);
    let Some(&(line, content)) = lines.first() else {
        return Err(Error::Parse {
            line: 0,
            msg: "missing `subset <ids>` line".into(),
        });
    };
    if lines.len() > 1 {
        return Err(Error::Parse {
            line: lines[1].0,
            msg: "trailing content after the subset line".into(),
        });
    }
    let rest = content.strip_prefix("subset").ok_or_else(|| Error::Parse {
        line,
        msg: format!("expected `subset <ids>`, got {content:?}"),
    })?;
    let rest = rest.trim();
    let mut ids = vec![];
    if !rest.is_empty() {
        for tok in rest.split(',') {
            let tok = tok.trim();
            let id: usize = tok.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad subset id {tok:?}"),
            })?;
            if id >= order {
                return Err(Error::Parse {
                    line,
                    msg: format!("subset id {id} exceeds group order {order}"),
                });
            }
            ids.push(id);
        }
    }
    Ok(GroupSubset::from_ids(order, &ids).expect("ids validated above"))
}

pub fn format_subset(s: &GroupSubset) -> String {
    let ids = s.ids();
    if ids.is_empty() {
        "subset\n".to_string()
    } else {
        let parts: Vec<String> = ids.iter().map(|id| id.to_string()).collect();
        format!("subset {}\n", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z3: &str = "order 3\n0 1 2\n1 2 0\n2 0 1\n";

    #[test]
    fn parses_and_round_trips_a_group() {
        let g = parse_group(Z3).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.mul(1, 2), 0);
        assert_eq!(format_group(&g), Z3);
        assert_eq!(format_group(&parse_group(&format_group(&g)).unwrap()), Z3);
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let text = "# the cyclic group\norder 2\n\n0 1 # identity row\n1 0\n";
        assert_eq!(parse_group(text).unwrap().order(), 2);
    }

    #[test]
    fn group_parse_errors_carry_lines() {
        match parse_group("order x\n") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("expected header error, got {other:?}"),
        }
        match parse_group("order 2\n0 1\n") {
            Err(Error::Parse { msg, .. }) => assert!(msg.contains("2 table rows")),
            other => panic!("expected row-count error, got {other:?}"),
        }
        match parse_group("order 2\n0 1\n1 5\n") {
            Err(Error::Parse { line: 3, msg }) => assert!(msg.contains("bad element id")),
            other => panic!("expected id error, got {other:?}"),
        }
        match parse_group("order 2\n0 1\n1 0 0\n") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("expected arity error, got {other:?}"),
        }
        // A well-formed table that is not a group surfaces the algebraic error.
        match parse_group("order 2\n0 1\n0 1\n") {
            Err(Error::NotLatinSquare(_)) => {}
            other => panic!("expected latin-square rejection, got {other:?}"),
        }
    }

    #[test]
    fn subsets_round_trip() {
        let s = parse_subset("subset 0, 4,8\n", 12).unwrap();
        assert_eq!(s.ids(), vec![0, 4, 8]);
        assert_eq!(format_subset(&s), "subset 0,4,8\n");
        let empty = parse_subset("subset\n", 5).unwrap();
        assert!(empty.ids().is_empty());
        assert_eq!(format_subset(&empty), "subset\n");
        assert_eq!(parse_subset("subset\n", 5).unwrap(), empty);
    }

    #[test]
    fn subset_parse_errors() {
        assert!(matches!(
            parse_subset("", 4),
            Err(Error::Parse { line: 0, .. })
        ));
        assert!(matches!(
            parse_subset("members 0\n", 4),
            Err(Error::Parse { line: 1, .. })
        ));
        match parse_subset("subset 0,9\n", 4) {
            Err(Error::Parse { line: 1, msg }) => assert!(msg.contains("exceeds group order")),
            other => panic!("expected range error, got {other:?}"),
        }
        assert!(matches!(
            parse_subset("subset 0,,1\n", 4),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_subset("subset 0\nsubset 1\n", 4),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
