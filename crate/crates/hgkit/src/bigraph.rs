//! Finite bipartite relations with packed incidence rows in both
//! orientations, plus the homogeneity and regularity predicates.

use fixedbitset::FixedBitSet;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ratio::from_count;

/// Which side of the bipartition a vertex set lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// A finite bipartite graph `(U, V, E)`. Adjacency is stored row-wise over V
/// and column-wise over U; the two encodings are kept in sync at
/// construction and the structure is immutable afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left_size: usize,
    right_size: usize,
    rows: Vec<FixedBitSet>,
    cols: Vec<FixedBitSet>,
}

/// Builds a graph from an explicit edge list. Duplicate pairs are permitted.
pub fn build_graph(
    left_size: usize,
    right_size: usize,
    edges: &[(usize, usize)],
) -> Result<BipartiteGraph> {
    let mut rows = vec![FixedBitSet::with_capacity(right_size); left_size];
    let mut cols = vec![FixedBitSet::with_capacity(left_size); right_size];
    for &(u, v) in edges {
        if u >= left_size {
            return Err(Error::OutOfRange {
                what: "left vertex",
                id: u,
                bound: left_size,
            });
        }
        if v >= right_size {
            return Err(Error::OutOfRange {
                what: "right vertex",
                id: v,
                bound: right_size,
            });
        }
        rows[u].insert(v);
        cols[v].insert(u);
    }
    Ok(BipartiteGraph {
        left_size,
        right_size,
        rows,
        cols,
    })
}

impl BipartiteGraph {
    /// Builds a graph from a membership predicate, row-major.
    pub fn from_fn(
        left_size: usize,
        right_size: usize,
        mut edge: impl FnMut(usize, usize) -> bool,
    ) -> BipartiteGraph {
        let mut rows = vec![FixedBitSet::with_capacity(right_size); left_size];
        let mut cols = vec![FixedBitSet::with_capacity(left_size); right_size];
        for (u, row) in rows.iter_mut().enumerate() {
            for v in 0..right_size {
                if edge(u, v) {
                    row.insert(v);
                    cols[v].insert(u);
                }
            }
        }
        BipartiteGraph {
            left_size,
            right_size,
            rows,
            cols,
        }
    }

    /// Builds a graph from pre-assembled rows; columns are derived.
    pub fn from_rows(left_size: usize, right_size: usize, rows: Vec<FixedBitSet>) -> BipartiteGraph {
        assert_eq!(rows.len(), left_size);
        let mut cols = vec![FixedBitSet::with_capacity(left_size); right_size];
        for (u, row) in rows.iter().enumerate() {
            assert!(row.len() >= right_size);
            for v in row.ones() {
                assert!(v < right_size, "row {u} has a bit at {v} >= {right_size}");
                cols[v].insert(u);
            }
        }
        BipartiteGraph {
            left_size,
            right_size,
            rows,
            cols,
        }
    }

    pub fn left_size(&self) -> usize {
        self.left_size
    }

    pub fn right_size(&self) -> usize {
        self.right_size
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    /// Neighborhood of a left vertex, as a bit set over V.
    pub fn row(&self, u: usize) -> &FixedBitSet {
        &self.rows[u]
    }

    /// Neighborhood of a right vertex, as a bit set over U.
    pub fn col(&self, v: usize) -> &FixedBitSet {
        &self.cols[v]
    }

    pub fn edge_count(&self) -> u64 {
        self.rows.iter().map(|r| r.count_ones(..) as u64).sum()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, row) in self.rows.iter().enumerate() {
            for v in row.ones() {
                out.push((u, v));
            }
        }
        out
    }

    /// The graph with all edges flipped.
    pub fn complement(&self) -> BipartiteGraph {
        BipartiteGraph::from_fn(self.left_size, self.right_size, |u, v| !self.has_edge(u, v))
    }

    /// The graph with the two sides swapped (edge `(v, u)` iff `(u, v)` here).
    pub fn transpose(&self) -> BipartiteGraph {
        BipartiteGraph {
            left_size: self.right_size,
            right_size: self.left_size,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }
}

/// A subset of one side's vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    pub side: Side,
    pub members: FixedBitSet,
}

impl VertexSet {
    pub fn empty(side: Side, size: usize) -> VertexSet {
        VertexSet {
            side,
            members: FixedBitSet::with_capacity(size),
        }
    }

    pub fn full(side: Side, size: usize) -> VertexSet {
        let mut members = FixedBitSet::with_capacity(size);
        members.insert_range(..);
        VertexSet { side, members }
    }

    pub fn from_ids(side: Side, size: usize, ids: &[usize]) -> Result<VertexSet> {
        let mut members = FixedBitSet::with_capacity(size);
        for &id in ids {
            if id >= size {
                return Err(Error::OutOfRange {
                    what: match side {
                        Side::Left => "left vertex",
                        Side::Right => "right vertex",
                    },
                    id,
                    bound: size,
                });
            }
            members.insert(id);
        }
        Ok(VertexSet { side, members })
    }

    pub fn count(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn ids(&self) -> Vec<usize> {
        self.members.ones().collect()
    }
}

/// Which way a box was judged homogeneous, if either.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HomogeneityKind {
    EdgeDense,
    NonedgeDense,
    Neither,
}

/// Outcome of the homogeneity test on a box `X x Y`: the box is edge-dense
/// (resp. nonedge-dense) when its edges (resp. non-edges) number at least
/// `(1 - eps)^2 |X||Y|`. Both can hold; `kind` records the first satisfied
/// in the order (edge-dense, nonedge-dense).
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityVerdict {
    pub kind: HomogeneityKind,
    pub edge_count: u64,
    pub box_size: u64,
    pub threshold: BigRational,
}

/// Exact number of edges inside `X x Y`, by word-parallel row intersection.
pub fn edge_count_between(g: &BipartiteGraph, x: &VertexSet, y: &VertexSet) -> u64 {
    assert_eq!(x.side, Side::Left, "X must be a left vertex set");
    assert_eq!(y.side, Side::Right, "Y must be a right vertex set");
    assert_eq!(x.members.len(), g.left_size());
    assert_eq!(y.members.len(), g.right_size());
    x.members
        .ones()
        .map(|u| g.rows[u].intersection_count(&y.members) as u64)
        .sum()
}

/// Homogeneity verdict for the box `X x Y` at threshold `(1-eps)^2 |X||Y|`,
/// decided in exact rational arithmetic (the comparison is `>=`).
pub fn is_eps_homogeneous(
    g: &BipartiteGraph,
    x: &VertexSet,
    y: &VertexSet,
    eps: &BigRational,
) -> Result<HomogeneityVerdict> {
    if x.is_empty() {
        return Err(Error::EmptySide("left"));
    }
    if y.is_empty() {
        return Err(Error::EmptySide("right"));
    }
    let edge_count = edge_count_between(g, x, y);
    let box_size = (x.count() as u64) * (y.count() as u64);
    let one_minus = BigRational::one() - eps;
    let threshold = &one_minus * &one_minus * from_count(box_size as u128);
    let kind = if from_count(edge_count as u128) >= threshold {
        HomogeneityKind::EdgeDense
    } else if from_count((box_size - edge_count) as u128) >= threshold {
        HomogeneityKind::NonedgeDense
    } else {
        HomogeneityKind::Neither
    };
    Ok(HomogeneityVerdict {
        kind,
        edge_count,
        box_size,
        threshold,
    })
}

/// Outcome of the regularity test. `exhaustive` is false when the subset
/// space was too large and only seeded sampling was performed; `samples`
/// reports how many subsets were tried in that case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityCheck {
    pub regular: bool,
    pub exhaustive: bool,
    pub samples: u64,
}

/// Cap on the side size for exhaustive subset enumeration.
const EXHAUSTIVE_REGULARITY_CAP: usize = 16;
/// Subsets drawn per side in the sampled path.
const REGULARITY_SAMPLES: u64 = 2048;
/// Fixed stream for the sampled path, so verdicts are reproducible.
const REGULARITY_SAMPLE_SEED: u64 = 0x5eed_4e67;

/// Density-deviation regularity: the box `X x Y` is `eps`-regular when every
/// `A ⊆ X`, `B ⊆ Y` with `|A| >= eps|X|`, `|B| >= eps|Y|` (both nonempty)
/// satisfies `|d(A,B) - d(X,Y)| <= eps`. Exhaustive for sides up to 16;
/// larger boxes fall back to seeded sampling of one side with the other side
/// still checked exactly, flagged non-exhaustive.
pub fn is_eps_regular(
    g: &BipartiteGraph,
    x: &VertexSet,
    y: &VertexSet,
    eps: &BigRational,
) -> Result<RegularityCheck> {
    if x.is_empty() {
        return Err(Error::EmptySide("left"));
    }
    if y.is_empty() {
        return Err(Error::EmptySide("right"));
    }
    let nx = x.count();
    let ny = y.count();

    // d(X,Y) and the acceptance window [d - eps, d + eps].
    let total_edges = edge_count_between(g, x, y);
    let d = from_count(total_edges as u128) / from_count((nx * ny) as u128);
    let hi = &d + eps;
    let lo = &d - eps;

    // Minimum qualifying subset sizes (nonempty).
    let min_a = min_subset_size(eps, nx);
    let min_b = min_subset_size(eps, ny);
    if min_a > nx || min_b > ny {
        // No qualifying pair exists; vacuously regular.
        return Ok(RegularityCheck {
            regular: true,
            exhaustive: true,
            samples: 0,
        });
    }

    // Work with A over the smaller side so the enumeration is cheapest; the
    // per-A check over the opposite side is exact either way.
    let (a_ids, b_ids, min_a, min_b, flipped) = if nx <= ny {
        (x.ids(), y.ids(), min_a, min_b, false)
    } else {
        (y.ids(), x.ids(), min_b, min_a, true)
    };

    let check_a = |mask: u64| -> bool {
        let a_size = mask.count_ones() as usize;
        if a_size < min_a {
            return true;
        }
        // w[j] = number of A-vertices adjacent to b_ids[j]. The extreme
        // densities over all B of size t are reached by the t largest and
        // t smallest weights, so sorting w settles every B at once.
        let mut w: Vec<u64> = b_ids
            .iter()
            .map(|&b| {
                let mut c = 0u64;
                for (i, &a) in a_ids.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        let (u, v) = if flipped { (b, a) } else { (a, b) };
                        if g.has_edge(u, v) {
                            c += 1;
                        }
                    }
                }
                c
            })
            .collect();
        w.sort_unstable();
        let mut prefix = vec![0u64; w.len() + 1];
        for (j, &wj) in w.iter().enumerate() {
            prefix[j + 1] = prefix[j] + wj;
        }
        let total: u64 = prefix[w.len()];
        for t in min_b..=w.len() {
            let max_t = total - prefix[w.len() - t];
            let min_t = prefix[t];
            let denom = from_count((a_size * t) as u128);
            if from_count(max_t as u128) > &hi * &denom {
                return false;
            }
            if from_count(min_t as u128) < &lo * &denom {
                return false;
            }
        }
        true
    };

    if nx <= EXHAUSTIVE_REGULARITY_CAP && ny <= EXHAUSTIVE_REGULARITY_CAP {
        for mask in 1u64..(1u64 << a_ids.len()) {
            if !check_a(mask) {
                return Ok(RegularityCheck {
                    regular: false,
                    exhaustive: true,
                    samples: 0,
                });
            }
        }
        return Ok(RegularityCheck {
            regular: true,
            exhaustive: true,
            samples: 0,
        });
    }

    // Sampled path: seeded random qualifying subsets of the enumerated side.
    let mut rng = ChaCha8Rng::seed_from_u64(REGULARITY_SAMPLE_SEED);
    let n = a_ids.len().min(63);
    for _ in 0..REGULARITY_SAMPLES {
        let size = rng.gen_range(min_a.max(1)..=n);
        let mut mask = 0u64;
        let mut picked = 0usize;
        while picked < size {
            let i = rng.gen_range(0..n);
            if mask >> i & 1 == 0 {
                mask |= 1 << i;
                picked += 1;
            }
        }
        if !check_a(mask) {
            return Ok(RegularityCheck {
                regular: false,
                exhaustive: false,
                samples: REGULARITY_SAMPLES,
            });
        }
    }
    Ok(RegularityCheck {
        regular: true,
        exhaustive: false,
        samples: REGULARITY_SAMPLES,
    })
}

/// Smallest nonempty subset size meeting `|A| >= eps * n`.
fn min_subset_size(eps: &BigRational, n: usize) -> usize {
    crate::ratio::ceil_to_usize(&(eps * from_count(n as u128))).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::ratio;

    pub(crate) fn hg2() -> BipartiteGraph {
        build_graph(2, 2, &[(0, 0), (0, 1), (1, 1)]).unwrap()
    }

    fn k23() -> BipartiteGraph {
        let edges: Vec<_> = (0..2).flat_map(|u| (0..3).map(move |v| (u, v))).collect();
        build_graph(2, 3, &edges).unwrap()
    }

    #[test]
    fn build_canonical_and_complete() {
        let g = hg2();
        assert!(g.has_edge(0, 0) && g.has_edge(0, 1) && g.has_edge(1, 1));
        assert!(!g.has_edge(1, 0));
        assert_eq!(g.edge_count(), 3);

        let k = k23();
        assert_eq!(k.edge_count(), 6);

        let e = build_graph(3, 3, &[]).unwrap();
        assert_eq!(e.edge_count(), 0);
        assert!(e.rows.iter().all(|r| r.is_clear()));
    }

    #[test]
    fn build_rejects_out_of_range() {
        let err = build_graph(2, 2, &[(2, 0)]).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { id: 2, .. }));
        let err = build_graph(2, 2, &[(0, 5)]).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { id: 5, .. }));
    }

    #[test]
    fn rows_and_cols_stay_in_sync() {
        let g = build_graph(3, 4, &[(0, 1), (2, 3), (1, 0), (0, 0)]).unwrap();
        for u in 0..3 {
            for v in 0..4 {
                assert_eq!(g.row(u).contains(v), g.col(v).contains(u));
            }
        }
    }

    #[test]
    fn counts_edges_between_sets() {
        let k = k23();
        let x = VertexSet::full(Side::Left, 2);
        let y = VertexSet::full(Side::Right, 3);
        assert_eq!(edge_count_between(&k, &x, &y), 6);

        let g = hg2();
        let x = VertexSet::full(Side::Left, 2);
        let y = VertexSet::full(Side::Right, 2);
        assert_eq!(edge_count_between(&g, &x, &y), 3);

        let e = build_graph(3, 3, &[]).unwrap();
        let x = VertexSet::from_ids(Side::Left, 3, &[0, 2]).unwrap();
        let y = VertexSet::from_ids(Side::Right, 3, &[1]).unwrap();
        assert_eq!(edge_count_between(&e, &x, &y), 0);

        let empty = VertexSet::empty(Side::Left, 3);
        let y = VertexSet::full(Side::Right, 3);
        assert_eq!(edge_count_between(&e, &empty, &y), 0);
    }

    #[test]
    fn homogeneity_basic_verdicts() {
        let k = k23();
        let v = is_eps_homogeneous(
            &k,
            &VertexSet::full(Side::Left, 2),
            &VertexSet::full(Side::Right, 3),
            &ratio(1, 10),
        )
        .unwrap();
        assert_eq!(v.kind, HomogeneityKind::EdgeDense);
        assert_eq!((v.edge_count, v.box_size), (6, 6));

        let e = build_graph(3, 3, &[]).unwrap();
        let v = is_eps_homogeneous(
            &e,
            &VertexSet::full(Side::Left, 3),
            &VertexSet::full(Side::Right, 3),
            &ratio(1, 10),
        )
        .unwrap();
        assert_eq!(v.kind, HomogeneityKind::NonedgeDense);
    }

    #[test]
    fn homogeneity_neither_with_exact_threshold() {
        // 3 edges in a 2x2 box against threshold (9/10)^2 * 4 = 81/25.
        let g = hg2();
        let v = is_eps_homogeneous(
            &g,
            &VertexSet::full(Side::Left, 2),
            &VertexSet::full(Side::Right, 2),
            &ratio(1, 10),
        )
        .unwrap();
        assert_eq!(v.kind, HomogeneityKind::Neither);
        assert_eq!(v.edge_count, 3);
        assert_eq!(v.box_size, 4);
        assert_eq!(v.threshold, ratio(81, 25));
    }

    #[test]
    fn homogeneity_boundary_is_inclusive() {
        // eps = 1/2 over a 2x2 box: threshold (1/2)^2 * 4 = 1; exactly one
        // edge must already count as edge-dense.
        let g = build_graph(2, 2, &[(0, 0)]).unwrap();
        let v = is_eps_homogeneous(
            &g,
            &VertexSet::full(Side::Left, 2),
            &VertexSet::full(Side::Right, 2),
            &ratio(1, 2),
        )
        .unwrap();
        assert_eq!(v.threshold, ratio(1, 1));
        assert_eq!(v.kind, HomogeneityKind::EdgeDense);
    }

    #[test]
    fn homogeneity_at_zero_eps() {
        let g = hg2();
        let full_x = VertexSet::full(Side::Left, 2);
        let full_y = VertexSet::full(Side::Right, 2);
        let v = is_eps_homogeneous(&g, &full_x, &full_y, &ratio(0, 1)).unwrap();
        assert_eq!(v.kind, HomogeneityKind::Neither);

        let k = k23();
        let v = is_eps_homogeneous(
            &k,
            &VertexSet::full(Side::Left, 2),
            &VertexSet::full(Side::Right, 3),
            &ratio(0, 1),
        )
        .unwrap();
        assert_eq!(v.kind, HomogeneityKind::EdgeDense);
    }

    #[test]
    fn homogeneity_rejects_empty_sets() {
        let g = hg2();
        let err = is_eps_homogeneous(
            &g,
            &VertexSet::empty(Side::Left, 2),
            &VertexSet::full(Side::Right, 2),
            &ratio(1, 10),
        )
        .unwrap_err();
        assert_eq!(err, Error::EmptySide("left"));
    }

    #[test]
    fn regularity_constant_boxes() {
        let k = k23();
        let r = is_eps_regular(
            &k,
            &VertexSet::full(Side::Left, 2),
            &VertexSet::full(Side::Right, 3),
            &ratio(3, 10),
        )
        .unwrap();
        assert!(r.regular && r.exhaustive);

        let e = build_graph(3, 3, &[]).unwrap();
        let r = is_eps_regular(
            &e,
            &VertexSet::full(Side::Left, 3),
            &VertexSet::full(Side::Right, 3),
            &ratio(1, 100),
        )
        .unwrap();
        assert!(r.regular && r.exhaustive);
    }

    #[test]
    fn regularity_detects_deviation() {
        // d(X,Y) = 3/4; A = {u_2}, B = {v_1} gives density 0.
        let g = hg2();
        let r = is_eps_regular(
            &g,
            &VertexSet::full(Side::Left, 2),
            &VertexSet::full(Side::Right, 2),
            &ratio(1, 4),
        )
        .unwrap();
        assert!(!r.regular);
        assert!(r.exhaustive);
    }

    #[test]
    fn regularity_matches_direct_enumeration_on_small_graphs() {
        // Independent oracle: enumerate every (A, B) pair directly.
        let mut rng_state = 0x2545_f491u64;
        let mut next = move || {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            rng_state
        };
        for _ in 0..40 {
            let (nu, nv) = (1 + (next() % 4) as usize, 1 + (next() % 4) as usize);
            let mut edges = Vec::new();
            for u in 0..nu {
                for v in 0..nv {
                    if next() % 2 == 0 {
                        edges.push((u, v));
                    }
                }
            }
            let g = build_graph(nu, nv, &edges).unwrap();
            let x = VertexSet::full(Side::Left, nu);
            let y = VertexSet::full(Side::Right, nv);
            for eps in [ratio(1, 4), ratio(1, 2), ratio(1, 3)] {
                let got = is_eps_regular(&g, &x, &y, &eps).unwrap();
                assert!(got.exhaustive);
                assert_eq!(got.regular, regular_oracle(&g, nu, nv, &eps));
            }
        }
    }

    fn regular_oracle(g: &BipartiteGraph, nu: usize, nv: usize, eps: &BigRational) -> bool {
        let d_num = g.edge_count() as i64;
        let d = ratio(d_num, (nu * nv) as i64);
        let min_a = min_subset_size(eps, nu);
        let min_b = min_subset_size(eps, nv);
        for am in 1u32..(1 << nu) {
            if (am.count_ones() as usize) < min_a {
                continue;
            }
            for bm in 1u32..(1 << nv) {
                if (bm.count_ones() as usize) < min_b {
                    continue;
                }
                let mut e = 0i64;
                for u in 0..nu {
                    for v in 0..nv {
                        if am >> u & 1 == 1 && bm >> v & 1 == 1 && g.has_edge(u, v) {
                            e += 1;
                        }
                    }
                }
                let size = (am.count_ones() * bm.count_ones()) as i64;
                let dev = ratio(e, size) - &d;
                let dev = if dev < ratio(0, 1) { -dev } else { dev };
                if &dev > eps {
                    return false;
                }
            }
        }
        true
    }
}
