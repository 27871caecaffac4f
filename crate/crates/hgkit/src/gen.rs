//! Deterministic generators for benchmark graphs and groups.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bigraph::BipartiteGraph;
use crate::error::{Error, Result};
use crate::group::{validate_group, FiniteGroup};

/// The order-`n` half-graph: vertices `0..n` on each side, edge `(i, j)`
/// exactly when `i <= j`.
pub fn gen_canonical_halfgraph(n: usize) -> BipartiteGraph {
    assert!(n >= 1, "half-graphs need at least one vertex per side");
    BipartiteGraph::from_fn(n, n, |i, j| i <= j)
}

/// Union of complete bipartite blocks with independent noise.
///
/// Block `t` contributes `blocks[t].0` fresh left vertices and `blocks[t].1`
/// fresh right vertices (ids assigned block by block). The base graph joins
/// a left and a right vertex exactly when they sit in the same block; every
/// pair is then flipped independently with probability `noise`.
///
/// `noise` must lie in `[0, 1)` and its denominator must fit in `u64`; the
/// flip draws are exact integer comparisons, so the distribution carries no
/// rounding. At `noise = 0` no generator state is consumed at all. Pairs are
/// drawn in row-major order, so equal seeds give byte-identical graphs.
pub fn gen_biclique_union(
    blocks: &[(usize, usize)],
    noise: &BigRational,
    seed: u64,
) -> Result<BipartiteGraph> {
    assert!(
        !noise.is_negative() && noise < &BigRational::from_integer(1.into()),
        "noise must lie in [0, 1)"
    );
    let left: usize = blocks.iter().map(|b| b.0).sum();
    let right: usize = blocks.iter().map(|b| b.1).sum();
    if left == 0 || right == 0 {
        return Err(Error::ZeroSide("biclique union"));
    }

    let mut left_block = Vec::with_capacity(left);
    let mut right_block = Vec::with_capacity(right);
    for (t, &(l, r)) in blocks.iter().enumerate() {
        left_block.extend(std::iter::repeat(t).take(l));
        right_block.extend(std::iter::repeat(t).take(r));
    }

    let base = BipartiteGraph::from_fn(left, right, |u, v| left_block[u] == right_block[v]);
    if noise.is_zero() {
        return Ok(base);
    }

    let num = noise
        .numer()
        .to_u64()
        .expect("noise in [0,1) with u64 denominator has a u64 numerator");
    let den = noise
        .denom()
        .to_u64()
        .expect("noise denominator must fit in u64");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(BipartiteGraph::from_fn(left, right, |u, v| {
        let flip = rng.gen_range(0..den) < num;
        base.has_edge(u, v) != flip
    }))
}

/// Family picker for `gen_group`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Product(Box<GroupKind>, Box<GroupKind>),
}

impl GroupKind {
    /// Order of the group this kind describes, saturating at `u128::MAX`.
    pub fn order(&self) -> u128 {
        match self {
            GroupKind::Cyclic(n) => *n as u128,
            GroupKind::Dihedral(n) => 2u128.saturating_mul(*n as u128),
            GroupKind::Symmetric(n) => {
                let mut f = 1u128;
                for i in 2..=(*n as u128) {
                    f = f.saturating_mul(i);
                }
                f
            }
            GroupKind::Product(a, b) => a.order().saturating_mul(b.order()),
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupKind::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupKind::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupKind::Product(a, b) => write!(f, "product({a},{b})"),
        }
    }
}

/// Parses the kind grammar: `cyclic:N`, `dihedral:N`, `symmetric:N`, or
/// `product(KIND,KIND)` with arbitrary nesting. Whitespace around tokens is
/// tolerated; keywords are lowercase.
/// Nesting cap for group family expressions; far beyond anything the
/// generation order cap admits, but it keeps hostile input from recursing
/// through the stack.
const MAX_KIND_DEPTH: usize = 32;

pub fn parse_group_kind(s: &str) -> Result<GroupKind> {
    parse_group_kind_at(s, 0)
}

fn parse_group_kind_at(s: &str, depth: usize) -> Result<GroupKind> {
    let bad = |msg: String| Error::Parse { line: 0, msg };
    if depth > MAX_KIND_DEPTH {
        return Err(bad(format!(
            "group expression nests deeper than {MAX_KIND_DEPTH}"
        )));
    }
    let raw = s.trim();
    if let Some(rest) = raw.strip_prefix("product") {
        let rest = rest.trim();
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| bad(format!("product needs parentheses in {raw:?}")))?;
        // Split on the comma at parenthesis nesting zero.
        let mut paren = 0usize;
        let mut split = None;
        for (i, c) in inner.char_indices() {
            match c {
                '(' => paren += 1,
                ')' => {
                    paren = paren
                        .checked_sub(1)
                        .ok_or_else(|| bad(format!("unbalanced parentheses in {raw:?}")))?
                }
                ',' if paren == 0 => {
                    if split.is_some() {
                        return Err(bad(format!("product takes exactly two factors in {raw:?}")));
                    }
                    split = Some(i);
                }
                _ => {}
            }
        }
        let i = split.ok_or_else(|| bad(format!("product takes two factors in {raw:?}")))?;
        let a = parse_group_kind_at(&inner[..i], depth + 1)?;
        let b = parse_group_kind_at(&inner[i + 1..], depth + 1)?;
        return Ok(GroupKind::Product(Box::new(a), Box::new(b)));
    }
    let (name, arg) = raw
        .split_once(':')
        .ok_or_else(|| bad(format!("expected FAMILY:N or product(...), got {raw:?}")))?;
    let n: usize = arg
        .trim()
        .parse()
        .map_err(|_| bad(format!("bad group size {arg:?}")))?;
    match name.trim() {
        "cyclic" => Ok(GroupKind::Cyclic(n)),
        "dihedral" => Ok(GroupKind::Dihedral(n)),
        "symmetric" => Ok(GroupKind::Symmetric(n)),
        other => Err(bad(format!("unknown group family {other:?}"))),
    }
}

fn cyclic_rows(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
}

/// Dihedral group of order `2n`, elements `t*n + i` meaning flip^t rot^i
/// with `flip rot = rot^(-1) flip`.
fn dihedral_rows(n: usize) -> Vec<Vec<usize>> {
    let order = 2 * n;
    let mul = |a: usize, b: usize| -> usize {
        let (t1, i1) = (a / n, a % n);
        let (t2, i2) = (b / n, b % n);
        let i1 = if t2 == 1 { (n - i1) % n } else { i1 };
        ((t1 + t2) % 2) * n + (i1 + i2) % n
    };
    (0..order)
        .map(|a| (0..order).map(|b| mul(a, b)).collect())
        .collect()
}

fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            rec(rest, prefix, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut out = vec![];
    rec(&mut (0..n).collect(), &mut vec![], &mut out);
    out
}

/// Symmetric group on `0..n`, elements ordered by one-line notation
/// lexicographically, composed as functions: `(g * h)(x) = g(h(x))`.
fn symmetric_rows(n: usize) -> Vec<Vec<usize>> {
    let perms = permutations_lex(n);
    let index: std::collections::HashMap<&[usize], usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    perms
        .iter()
        .map(|g| {
            perms
                .iter()
                .map(|h| {
                    let gh: Vec<usize> = (0..n).map(|x| g[h[x]]).collect();
                    index[gh.as_slice()]
                })
                .collect()
        })
        .collect()
}

fn product_rows(a: &FiniteGroup, b: &FiniteGroup) -> Vec<Vec<usize>> {
    let (na, nb) = (a.order(), b.order());
    let order = na * nb;
    let mul = |x: usize, y: usize| -> usize {
        let (xa, xb) = (x / nb, x % nb);
        let (ya, yb) = (y / nb, y % nb);
        a.mul(xa, ya) * nb + b.mul(xb, yb)
    };
    (0..order)
        .map(|x| (0..order).map(|y| mul(x, y)).collect())
        .collect()
}

/// Cap on generated group orders; larger requests are refused rather than
/// silently truncated.
pub const GEN_GROUP_ORDER_CAP: u128 = 256;

/// Builds the requested group and runs it through `validate_group`, so every
/// returned table is a certified group with its full metadata.
pub fn gen_group(kind: &GroupKind) -> Result<FiniteGroup> {
    let order = kind.order();
    if order > GEN_GROUP_ORDER_CAP {
        return Err(Error::BudgetExceeded {
            task: "group generation order",
            needed: order,
            cap: GEN_GROUP_ORDER_CAP,
        });
    }
    let rows = match kind {
        GroupKind::Cyclic(n) => cyclic_rows(*n),
        GroupKind::Dihedral(n) => dihedral_rows(*n),
        GroupKind::Symmetric(n) => symmetric_rows(*n),
        GroupKind::Product(a, b) => {
            let ga = gen_group(a)?;
            let gb = gen_group(b)?;
            product_rows(&ga, &gb)
        }
    };
    validate_group(&rows)
}
