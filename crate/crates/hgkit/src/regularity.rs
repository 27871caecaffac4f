//! Partitioning both sides of a bipartite graph into homogeneous boxes.
//!
//! A partition reserves index 0 on each side for an exceptional part (always
//! present, possibly empty). It certifies a graph when both exceptional parts
//! are small and every box between non-exceptional parts is eps-homogeneous.
//! `atom_partition` refines a side by the neighborhoods of chosen witness
//! vertices, `greedy_regularize` picks those witnesses automatically, and
//! `exhaustive_min_partition` brute-forces the smallest certifying partition
//! on desk-size graphs.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::bigraph::{
    is_eps_homogeneous, BipartiteGraph, HomogeneityKind, HomogeneityVerdict, Side, VertexSet,
};
use crate::error::{Error, Result};
use crate::ratio::{ceil_to_usize, from_count};

/// Two-sided partition; `left_parts[0]` and `right_parts[0]` are the
/// exceptional parts and may be empty, all other parts must be non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityPartition {
    pub left_parts: Vec<VertexSet>,
    pub right_parts: Vec<VertexSet>,
}

impl RegularityPartition {
    /// Builds a partition from id lists, index 0 exceptional on each side.
    pub fn from_ids(
        g: &BipartiteGraph,
        left: &[Vec<usize>],
        right: &[Vec<usize>],
    ) -> Result<RegularityPartition> {
        let build = |side: Side, size: usize, lists: &[Vec<usize>]| -> Result<Vec<VertexSet>> {
            lists
                .iter()
                .map(|ids| {
                    VertexSet::from_ids(side, size, ids).map_err(|e| {
                        Error::MalformedPartition(format!("{} part: {e}", side.name()))
                    })
                })
                .collect()
        };
        Ok(RegularityPartition {
            left_parts: build(Side::Left, g.left_size(), left)?,
            right_parts: build(Side::Right, g.right_size(), right)?,
        })
    }

    /// One part per side holding everything, exceptional parts empty.
    pub fn trivial(g: &BipartiteGraph) -> RegularityPartition {
        RegularityPartition {
            left_parts: vec![
                VertexSet::empty(Side::Left, g.left_size()),
                VertexSet::full(Side::Left, g.left_size()),
            ],
            right_parts: vec![
                VertexSet::empty(Side::Right, g.right_size()),
                VertexSet::full(Side::Right, g.right_size()),
            ],
        }
    }
}

/// Verdict grid and exceptional-size checks for one partition.
///
/// `grid[i][j]` covers the box `left_parts[i + 1] x right_parts[j + 1]`.
/// `pass` holds exactly when both exceptional parts are small and no cell of
/// the grid is `Neither`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionReport {
    pub eps: BigRational,
    pub delta: BigRational,
    pub left_exceptional_ok: bool,
    pub right_exceptional_ok: bool,
    pub grid: Vec<Vec<HomogeneityVerdict>>,
    pub pass: bool,
}

fn validate_side(size: usize, parts: &[VertexSet], side: Side) -> Result<()> {
    if parts.is_empty() {
        return Err(Error::MalformedPartition(format!(
            "{} side has no parts (index 0 must hold the exceptional part)",
            side.name()
        )));
    }
    let mut seen = FixedBitSet::with_capacity(size);
    let mut total = 0usize;
    for part in parts {
        if part.side != side {
            return Err(Error::MalformedPartition(format!(
                "{} part tagged with the wrong side",
                side.name()
            )));
        }
        if part.members.len() != size {
            return Err(Error::MalformedPartition(format!(
                "{} part sized for {} vertices, the graph has {}",
                side.name(),
                part.members.len(),
                size
            )));
        }
        total += part.count();
        seen.union_with(&part.members);
    }
    let covered = seen.count_ones(..);
    if total > covered {
        return Err(Error::MalformedPartition(format!(
            "{} parts overlap",
            side.name()
        )));
    }
    if covered != size {
        return Err(Error::MalformedPartition(format!(
            "{} parts cover {covered} of {size} vertices",
            side.name()
        )));
    }
    for (index, part) in parts.iter().enumerate().skip(1) {
        if part.is_empty() {
            return Err(Error::EmptyPart {
                side: side.name(),
                index,
            });
        }
    }
    Ok(())
}

/// An empty exceptional part is always acceptable, so `delta = 0` certifies
/// partitions with nothing swept aside.
fn exceptional_ok(count: usize, side_size: usize, delta: &BigRational) -> bool {
    count == 0 || from_count(count as u128) < delta * from_count(side_size as u128)
}

/// Checks a partition against a graph: both sides must partition their
/// vertex sets (exceptional part at index 0, non-exceptional parts
/// non-empty), the exceptional parts must have fewer than `delta * side`
/// vertices (or be empty), and every non-exceptional box must be
/// eps-homogeneous.
pub fn check_partition(
    g: &BipartiteGraph,
    p: &RegularityPartition,
    eps: &BigRational,
    delta: &BigRational,
) -> Result<PartitionReport> {
    validate_side(g.left_size(), &p.left_parts, Side::Left)?;
    validate_side(g.right_size(), &p.right_parts, Side::Right)?;

    let left_exceptional_ok = exceptional_ok(p.left_parts[0].count(), g.left_size(), delta);
    let right_exceptional_ok = exceptional_ok(p.right_parts[0].count(), g.right_size(), delta);

    let mut grid = Vec::with_capacity(p.left_parts.len().saturating_sub(1));
    for x in &p.left_parts[1..] {
        let mut row = Vec::with_capacity(p.right_parts.len().saturating_sub(1));
        for y in &p.right_parts[1..] {
            row.push(is_eps_homogeneous(g, x, y, eps)?);
        }
        grid.push(row);
    }

    let homogeneous = grid
        .iter()
        .flatten()
        .all(|v| v.kind != HomogeneityKind::Neither);
    let pass = left_exceptional_ok && right_exceptional_ok && homogeneous;
    Ok(PartitionReport {
        eps: eps.clone(),
        delta: delta.clone(),
        left_exceptional_ok,
        right_exceptional_ok,
        grid,
        pass,
    })
}

/// Groups one side by its incidence pattern against the witness list.
/// Atoms are keyed by the pattern (one byte per witness, in list order) and
/// emitted in ascending pattern order; atoms smaller than `min_part` are
/// swept into the exceptional part.
fn atoms_for_side(
    size: usize,
    witnesses: &[usize],
    side: Side,
    min_part: usize,
    related: impl Fn(usize, usize) -> bool,
) -> Vec<VertexSet> {
    let mut atoms: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
    for x in 0..size {
        let pattern: Vec<u8> = witnesses.iter().map(|&w| related(x, w) as u8).collect();
        atoms.entry(pattern).or_default().push(x);
    }
    let mut exceptional = VertexSet::empty(side, size);
    let mut parts = vec![];
    for members in atoms.into_values() {
        if members.len() < min_part {
            for id in members {
                exceptional.members.insert(id);
            }
        } else {
            parts.push(VertexSet::from_ids(side, size, &members).expect("atom ids in range"));
        }
    }
    let mut all = vec![exceptional];
    all.append(&mut parts);
    all
}

/// Partitions the left side into atoms of the neighborhoods of
/// `right_witnesses` and the right side into atoms of the neighborhoods of
/// `left_witnesses`. With no witnesses a side stays whole. Atoms with fewer
/// than `min_part` vertices land in the exceptional part.
pub fn atom_partition(
    g: &BipartiteGraph,
    right_witnesses: &[usize],
    left_witnesses: &[usize],
    min_part: usize,
) -> Result<RegularityPartition> {
    for &b in right_witnesses {
        if b >= g.right_size() {
            return Err(Error::OutOfRange {
                what: "right witness",
                id: b,
                bound: g.right_size(),
            });
        }
    }
    for &a in left_witnesses {
        if a >= g.left_size() {
            return Err(Error::OutOfRange {
                what: "left witness",
                id: a,
                bound: g.left_size(),
            });
        }
    }
    let left_parts = atoms_for_side(
        g.left_size(),
        right_witnesses,
        Side::Left,
        min_part,
        |u, b| g.has_edge(u, b),
    );
    let right_parts = atoms_for_side(
        g.right_size(),
        left_witnesses,
        Side::Right,
        min_part,
        |v, a| g.has_edge(a, v),
    );
    Ok(RegularityPartition {
        left_parts,
        right_parts,
    })
}

/// Result of the greedy witness search.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyOutcome {
    pub partition: RegularityPartition,
    pub report: PartitionReport,
    pub right_witnesses: Vec<usize>,
    pub left_witnesses: Vec<usize>,
}

/// Sum over non-exceptional boxes of `min(edges, non-edges)`; the greedy
/// score a new witness tries to reduce.
fn imbalance(g: &BipartiteGraph, p: &RegularityPartition) -> u128 {
    let mut total = 0u128;
    for x in &p.left_parts[1..] {
        for y in &p.right_parts[1..] {
            let edges = crate::bigraph::edge_count_between(g, x, y) as u128;
            let box_size = x.count() as u128 * y.count() as u128;
            total += edges.min(box_size - edges);
        }
    }
    total
}

/// Count of distinct incidence patterns on one side (atoms before any
/// sweeping), used to size the `min_part` threshold.
fn atom_count(size: usize, witnesses: &[usize], related: impl Fn(usize, usize) -> bool) -> usize {
    let mut patterns: BTreeMap<Vec<u8>, ()> = BTreeMap::new();
    for x in 0..size {
        let pattern: Vec<u8> = witnesses.iter().map(|&w| related(x, w) as u8).collect();
        patterns.insert(pattern, ());
    }
    patterns.len()
}

/// Atom partition with the default per-side sweep threshold
/// `ceil(delta * side / (2 * atoms))`, which keeps each exceptional part
/// below `delta * side / 2` no matter how the atoms shrink.
fn witness_partition(
    g: &BipartiteGraph,
    right_witnesses: &[usize],
    left_witnesses: &[usize],
    delta: &BigRational,
) -> RegularityPartition {
    let threshold = |size: usize, atoms: usize| -> usize {
        ceil_to_usize(&(delta * from_count(size as u128) / from_count(2 * atoms as u128)))
    };
    let left_atoms = atom_count(g.left_size(), right_witnesses, |u, b| g.has_edge(u, b));
    let right_atoms = atom_count(g.right_size(), left_witnesses, |v, a| g.has_edge(a, v));
    let left_parts = atoms_for_side(
        g.left_size(),
        right_witnesses,
        Side::Left,
        threshold(g.left_size(), left_atoms),
        |u, b| g.has_edge(u, b),
    );
    let right_parts = atoms_for_side(
        g.right_size(),
        left_witnesses,
        Side::Right,
        threshold(g.right_size(), right_atoms),
        |v, a| g.has_edge(a, v),
    );
    RegularityPartition {
        left_parts,
        right_parts,
    }
}

/// Grows witness lists until the induced atom partition certifies the graph
/// or the budget runs out. Each round scores every candidate vertex drawn
/// from the failing boxes (right-side vertices split the left atoms and
/// vice versa), keeps the one that most reduces the imbalance, and breaks
/// ties toward right-side witnesses, then lower ids. `max_witnesses` bounds
/// each side separately.
pub fn greedy_regularize(
    g: &BipartiteGraph,
    eps: &BigRational,
    delta: &BigRational,
    max_witnesses: usize,
) -> Result<GreedyOutcome> {
    let mut right_witnesses: Vec<usize> = vec![];
    let mut left_witnesses: Vec<usize> = vec![];
    loop {
        let partition = witness_partition(g, &right_witnesses, &left_witnesses, delta);
        let report = check_partition(g, &partition, eps, delta)?;
        if report.pass {
            return Ok(GreedyOutcome {
                partition,
                report,
                right_witnesses,
                left_witnesses,
            });
        }

        let mut failing_left = FixedBitSet::with_capacity(g.left_size());
        let mut failing_right = FixedBitSet::with_capacity(g.right_size());
        for (i, row) in report.grid.iter().enumerate() {
            for (j, verdict) in row.iter().enumerate() {
                if verdict.kind == HomogeneityKind::Neither {
                    failing_left.union_with(&partition.left_parts[i + 1].members);
                    failing_right.union_with(&partition.right_parts[j + 1].members);
                }
            }
        }

        let mut candidates: Vec<(Side, usize)> = vec![];
        if right_witnesses.len() < max_witnesses {
            candidates.extend(
                failing_right
                    .ones()
                    .filter(|v| !right_witnesses.contains(v))
                    .map(|v| (Side::Right, v)),
            );
        }
        if left_witnesses.len() < max_witnesses {
            candidates.extend(
                failing_left
                    .ones()
                    .filter(|u| !left_witnesses.contains(u))
                    .map(|u| (Side::Left, u)),
            );
        }
        if candidates.is_empty() {
            return Ok(GreedyOutcome {
                partition,
                report,
                right_witnesses,
                left_witnesses,
            });
        }

        let mut best: Option<((Side, usize), u128)> = None;
        for &(side, v) in &candidates {
            let (mut rw, mut lw) = (right_witnesses.clone(), left_witnesses.clone());
            match side {
                Side::Right => rw.push(v),
                Side::Left => lw.push(v),
            }
            let trial = witness_partition(g, &rw, &lw, delta);
            let score = imbalance(g, &trial);
            if best.as_ref().map_or(true, |&(_, s)| score < s) {
                best = Some(((side, v), score));
            }
        }
        let ((side, v), _) = best.expect("candidate list is non-empty");
        match side {
            Side::Right => right_witnesses.push(v),
            Side::Left => left_witnesses.push(v),
        }
    }
}

/// Side caps for the exhaustive search; beyond them the search errors with
/// `BudgetExceeded` rather than silently churn.
pub const EXHAUSTIVE_SIDE_CAP: usize = 8;
pub const EXHAUSTIVE_PARTS_CAP: usize = 4;

/// All partitions of `0..n` into exactly `r` non-empty parts, each partition
/// listing parts in order of first appearance (restricted-growth order).
fn set_partitions(n: usize, r: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(
        n: usize,
        r: usize,
        next: usize,
        parts: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if next == n {
            if parts.len() == r {
                out.push(parts.clone());
            }
            return;
        }
        // Remaining elements must still be able to open the missing parts.
        let missing = r.saturating_sub(parts.len());
        if missing > n - next {
            return;
        }
        for i in 0..parts.len() {
            parts[i].push(next);
            rec(n, r, next + 1, parts, out);
            parts[i].pop();
        }
        if parts.len() < r {
            parts.push(vec![next]);
            rec(n, r, next + 1, parts, out);
            parts.pop();
        }
    }
    let mut out = vec![];
    if r >= 1 && r <= n {
        rec(n, r, 0, &mut vec![], &mut out);
    }
    out
}

/// Minimal edge count that makes a box of `box_size` cells eps-homogeneous
/// on one side: `ceil((1 - eps)^2 * box_size)`.
fn homogeneity_threshold(eps: &BigRational, box_size: u64) -> u64 {
    let q = (BigRational::one() - eps) * (BigRational::one() - eps);
    let scaled = q * BigRational::from_integer(BigInt::from(box_size));
    scaled
        .ceil()
        .to_integer()
        .to_u64()
        .expect("threshold fits u64 for desk-size boxes")
}

/// Searches every pair of side partitions with at most `max_parts`
/// non-exceptional parts per side (exceptional parts stay empty) for one
/// that certifies the graph, minimizing the total part count `r + s` and
/// breaking ties by smaller `r`, then enumeration order. Only graphs with
/// both sides at most `EXHAUSTIVE_SIDE_CAP` vertices are accepted.
pub fn exhaustive_min_partition(
    g: &BipartiteGraph,
    eps: &BigRational,
    delta: &BigRational,
    max_parts: usize,
) -> Result<Option<(RegularityPartition, usize, usize)>> {
    let (nu, nv) = (g.left_size(), g.right_size());
    if nu > EXHAUSTIVE_SIDE_CAP || nv > EXHAUSTIVE_SIDE_CAP {
        return Err(Error::BudgetExceeded {
            task: "exhaustive partition search side",
            needed: nu.max(nv) as u128,
            cap: EXHAUSTIVE_SIDE_CAP as u128,
        });
    }
    if max_parts == 0 || max_parts > EXHAUSTIVE_PARTS_CAP {
        return Err(Error::BudgetExceeded {
            task: "exhaustive partition search parts",
            needed: max_parts as u128,
            cap: EXHAUSTIVE_PARTS_CAP as u128,
        });
    }

    // Left rows as bitmasks over the right side; boxes are then counted with
    // word ops instead of rational arithmetic in the inner loop.
    let row_mask: Vec<u16> = (0..nu)
        .map(|u| {
            (0..nv)
                .filter(|&v| g.has_edge(u, v))
                .fold(0u16, |m, v| m | (1 << v))
        })
        .collect();
    let mut thresholds = [0u64; 65];
    for (box_size, slot) in thresholds.iter_mut().enumerate().skip(1) {
        *slot = homogeneity_threshold(eps, box_size as u64);
    }
    let homogeneous = |edges: u64, box_size: u64| -> bool {
        let t = thresholds[box_size as usize];
        edges >= t || box_size - edges >= t
    };

    let left_by_r: Vec<Vec<Vec<Vec<usize>>>> =
        (0..=max_parts).map(|r| set_partitions(nu, r)).collect();
    let right_by_s: Vec<Vec<Vec<Vec<usize>>>> =
        (0..=max_parts).map(|s| set_partitions(nv, s)).collect();

    for total in 2..=(2 * max_parts) {
        for r in 1..=max_parts.min(total - 1) {
            let s = total - r;
            if s > max_parts {
                continue;
            }
            for left in &left_by_r[r] {
                let left_masks: Vec<(u64, Vec<usize>)> = left
                    .iter()
                    .map(|part| (part.len() as u64, part.clone()))
                    .collect();
                for right in &right_by_s[s] {
                    let mut ok = true;
                    'cells: for (lsize, part) in &left_masks {
                        for rpart in right {
                            let rmask = rpart.iter().fold(0u16, |m, &v| m | (1 << v));
                            let edges: u64 = part
                                .iter()
                                .map(|&u| (row_mask[u] & rmask).count_ones() as u64)
                                .sum();
                            if !homogeneous(edges, lsize * rpart.len() as u64) {
                                ok = false;
                                break 'cells;
                            }
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let empty: Vec<usize> = vec![];
                    let mut left_lists = vec![empty.clone()];
                    left_lists.extend(left.iter().cloned());
                    let mut right_lists = vec![empty];
                    right_lists.extend(right.iter().cloned());
                    let partition = RegularityPartition::from_ids(g, &left_lists, &right_lists)?;
                    let report = check_partition(g, &partition, eps, delta)?;
                    debug_assert!(report.pass, "fast cell filter must agree with the checker");
                    if report.pass {
                        return Ok(Some((partition, r, s)));
                    }
                }
            }
        }
    }
    Ok(None)
}
