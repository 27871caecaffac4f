//! Binary trees over a bipartite relation and the extraction calculus.
//!
//! A tree of height `n` for a relation `phi` has branches `a_sigma`
//! (`sigma` over n-bit strings) and nodes `b_tau` (`tau` over strings of
//! length < n) with `phi(a_sigma, b_(sigma|i))` iff `sigma(i) = 0`. Nodes
//! and branches are positions holding element ids; the relation is a
//! bipartite graph with branches drawn from the left side and nodes from
//! the right.
//!
//! Positions are heap indices: the root node is 1, the children of `p` are
//! `2p` and `2p+1`. For height `n`, node positions are `1 .. 2^n` and
//! branch positions are `2^n .. 2^(n+1)`; a branch is addressed by its
//! offset `position - 2^n`, whose bits (most significant first) spell the
//! branch string.

use std::collections::BTreeSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bigraph::BipartiteGraph;
use crate::budget::{enumeration_budget, pow_saturating};
use crate::error::{Error, Result};
use crate::halfgraph::{verify_witness, HalfGraphWitness};

/// Depth of a heap position (root is depth 0).
pub fn pos_depth(pos: usize) -> usize {
    debug_assert!(pos >= 1);
    usize::BITS as usize - 1 - pos.leading_zeros() as usize
}

/// True iff `anc` is `pos` or an ancestor of `pos` in heap coordinates.
pub fn pos_is_ancestor(anc: usize, pos: usize) -> bool {
    let (da, dp) = (pos_depth(anc), pos_depth(pos));
    da <= dp && pos >> (dp - da) == anc
}

/// Renders a heap position as its bit string (the root is the empty string).
pub fn pos_to_bits(pos: usize) -> String {
    let d = pos_depth(pos);
    (0..d)
        .map(|i| if pos >> (d - 1 - i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parses a bit string into a heap position.
pub fn bits_to_pos(bits: &str) -> Result<usize> {
    let mut pos = 1usize;
    for c in bits.chars() {
        match c {
            '0' => pos *= 2,
            '1' => pos = 2 * pos + 1,
            _ => {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("bad position bit string {bits:?}"),
                })
            }
        }
    }
    Ok(pos)
}

/// A tree for a relation: element ids at every node and branch position,
/// plus the relation itself. The relation is shared, so trees derived from
/// one another do not copy it.
#[derive(Debug, Clone)]
pub struct PhiTree {
    height: usize,
    /// Indexed by branch offset (`2^height` entries), left-side element ids.
    branch_elem: Vec<usize>,
    /// Indexed by heap position (`2^height` entries, slot 0 unused),
    /// right-side element ids.
    node_elem: Vec<usize>,
    relation: Arc<BipartiteGraph>,
}

impl PhiTree {
    pub fn new(
        height: usize,
        branch_elem: Vec<usize>,
        node_elem: Vec<usize>,
        relation: impl Into<Arc<BipartiteGraph>>,
    ) -> Result<PhiTree> {
        let relation = relation.into();
        assert!(height >= 1, "tree height must be at least 1");
        if branch_elem.len() != 1 << height {
            return Err(Error::MissingEntry(format!(
                "expected {} branches, got {}",
                1usize << height,
                branch_elem.len()
            )));
        }
        if node_elem.len() != 1 << height {
            return Err(Error::MissingEntry(format!(
                "expected {} node slots, got {}",
                1usize << height,
                node_elem.len()
            )));
        }
        for &e in branch_elem.iter() {
            if e >= relation.left_size() {
                return Err(Error::OutOfRange {
                    what: "branch element",
                    id: e,
                    bound: relation.left_size(),
                });
            }
        }
        for pos in 1..1 << height {
            let e = node_elem[pos];
            if e >= relation.right_size() {
                return Err(Error::OutOfRange {
                    what: "node element",
                    id: e,
                    bound: relation.right_size(),
                });
            }
        }
        Ok(PhiTree {
            height,
            branch_elem,
            node_elem,
            relation,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of node positions, `2^height - 1`.
    pub fn node_count(&self) -> usize {
        (1 << self.height) - 1
    }

    pub fn branch_count(&self) -> usize {
        1 << self.height
    }

    /// One past the last node position.
    pub fn node_end(&self) -> usize {
        1 << self.height
    }

    pub fn is_leaf(&self, pos: usize) -> bool {
        pos >= 1 << (self.height - 1) && pos < 1 << self.height
    }

    pub fn node_elem(&self, pos: usize) -> usize {
        self.node_elem[pos]
    }

    pub fn branch_elem(&self, offset: usize) -> usize {
        self.branch_elem[offset]
    }

    /// Branch elements indexed by offset.
    pub fn branch_elems(&self) -> &[usize] {
        &self.branch_elem
    }

    /// Node elements indexed by heap position (slot 0 is unused).
    pub fn node_elems(&self) -> &[usize] {
        &self.node_elem
    }

    pub fn relation(&self) -> &BipartiteGraph {
        &self.relation
    }

    pub fn relation_arc(&self) -> Arc<BipartiteGraph> {
        Arc::clone(&self.relation)
    }

    /// Whether the relation holds between a branch (by offset) and a node
    /// (by position).
    pub fn holds(&self, branch_offset: usize, node_pos: usize) -> bool {
        self.relation
            .has_edge(self.branch_elem[branch_offset], self.node_elem[node_pos])
    }

    /// The node positions on a branch's path, root first.
    pub fn path_of_branch(&self, offset: usize) -> Vec<usize> {
        let mut pos = 1usize;
        let mut out = Vec::with_capacity(self.height);
        for i in 0..self.height {
            out.push(pos);
            pos = 2 * pos + (offset >> (self.height - 1 - i) & 1);
        }
        out
    }
}

/// True iff the defining pattern holds at every branch/path-node pair.
pub fn validate_tree(t: &PhiTree) -> bool {
    let n = t.height();
    for o in 0..t.branch_count() {
        let mut pos = 1usize;
        for i in 0..n {
            let bit = o >> (n - 1 - i) & 1;
            if t.holds(o, pos) != (bit == 0) {
                return false;
            }
            pos = 2 * pos + bit;
        }
    }
    true
}

/// A node-set selection claimed to form an m-subtree: a 1-subtree is a
/// single leaf; an m-subtree is an internal root plus (m-1)-subtrees inside
/// each child cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtreeSelection {
    pub positions: BTreeSet<usize>,
    pub claimed_height: usize,
    pub root: usize,
}

/// True iff the selection satisfies the recursive definition at its claimed
/// height (including the root matching the derived root).
pub fn validate_subtree(t: &PhiTree, s: &SubtreeSelection) -> bool {
    if s.claimed_height < 1 {
        return false;
    }
    if s.positions.iter().any(|&p| p < 1 || p >= t.node_end()) {
        return false;
    }
    match derive_root(&s.positions) {
        Some(r) if r == s.root => {}
        _ => return false,
    }
    check_selection(t, &s.positions, s.claimed_height)
}

/// The unique element that is an ancestor of every position in the set.
fn derive_root(set: &BTreeSet<usize>) -> Option<usize> {
    let &r = set.first()?;
    set.iter().all(|&p| pos_is_ancestor(r, p)).then_some(r)
}

fn check_selection(t: &PhiTree, set: &BTreeSet<usize>, m: usize) -> bool {
    if set.len() != (1 << m) - 1 {
        return false;
    }
    let Some(r) = derive_root(set) else {
        return false;
    };
    if m == 1 {
        return t.is_leaf(r);
    }
    if t.is_leaf(r) {
        return false;
    }
    let mut c0 = BTreeSet::new();
    let mut c1 = BTreeSet::new();
    for &p in set.iter() {
        if p == r {
            continue;
        }
        if pos_is_ancestor(2 * r, p) {
            c0.insert(p);
        } else if pos_is_ancestor(2 * r + 1, p) {
            c1.insert(p);
        } else {
            return false;
        }
    }
    check_selection(t, &c0, m - 1) && check_selection(t, &c1, m - 1)
}

/// Splits a valid selection of height >= 2 into its root and the two child
/// selections.
pub fn split_selection(s: &SubtreeSelection) -> (usize, SubtreeSelection, SubtreeSelection) {
    assert!(s.claimed_height >= 2);
    let r = s.root;
    let mut c0 = BTreeSet::new();
    let mut c1 = BTreeSet::new();
    for &p in s.positions.iter() {
        if p == r {
            continue;
        }
        if pos_is_ancestor(2 * r, p) {
            c0.insert(p);
        } else {
            c1.insert(p);
        }
    }
    let mk = |set: BTreeSet<usize>| {
        let root = *set.first().expect("child selection nonempty");
        SubtreeSelection {
            positions: set,
            claimed_height: s.claimed_height - 1,
            root,
        }
    };
    (r, mk(c0), mk(c1))
}

/// Finds an m-subtree whose positions all lie in `allowed` (a bit set over
/// heap positions), or None. The witness is deterministic: the root is the
/// first feasible position in preorder, then child selections are chosen
/// the same way recursively.
pub fn find_subtree(
    t: &PhiTree,
    allowed: &FixedBitSet,
    m: usize,
) -> Option<SubtreeSelection> {
    assert!(m >= 1);
    assert!(allowed.len() >= t.node_end(), "allowed set too small");
    if m > t.height() {
        return None;
    }
    let end = t.node_end();

    // exists[pos]: an m'-subtree rooted here using only allowed positions;
    // reach[pos]: some position in this cone has exists set. Both built
    // bottom-up level by level; only the final exists level is kept, the
    // reconstruction re-derives the rest per cone.
    let mut reach_prev = FixedBitSet::with_capacity(end);
    let mut exists_levels: Vec<FixedBitSet> = Vec::with_capacity(m);
    for level in 1..=m {
        let mut exists = FixedBitSet::with_capacity(end);
        let mut reach = FixedBitSet::with_capacity(end);
        for pos in (1..end).rev() {
            let leaf = t.is_leaf(pos);
            let e = if level == 1 {
                leaf && allowed.contains(pos)
            } else {
                !leaf
                    && allowed.contains(pos)
                    && reach_prev.contains(2 * pos)
                    && reach_prev.contains(2 * pos + 1)
            };
            if e {
                exists.insert(pos);
            }
            let r = e || (!leaf && (reach.contains(2 * pos) || reach.contains(2 * pos + 1)));
            if r {
                reach.insert(pos);
            }
        }
        exists_levels.push(exists);
        reach_prev = reach;
    }

    let root = preorder_first(t, 1, &exists_levels[m - 1])?;
    let mut positions = BTreeSet::new();
    reconstruct(t, &exists_levels, root, m, &mut positions);
    Some(SubtreeSelection {
        positions,
        claimed_height: m,
        root,
    })
}

/// First position in preorder within the cone of `top` satisfying `set`.
fn preorder_first(t: &PhiTree, top: usize, set: &FixedBitSet) -> Option<usize> {
    if top >= t.node_end() {
        return None;
    }
    if set.contains(top) {
        return Some(top);
    }
    preorder_first(t, 2 * top, set).or_else(|| preorder_first(t, 2 * top + 1, set))
}

fn reconstruct(
    t: &PhiTree,
    exists_levels: &[FixedBitSet],
    pos: usize,
    m: usize,
    out: &mut BTreeSet<usize>,
) {
    out.insert(pos);
    if m == 1 {
        return;
    }
    for child in [2 * pos, 2 * pos + 1] {
        let sub = preorder_first(t, child, &exists_levels[m - 2])
            .expect("feasibility was established by the level above");
        reconstruct(t, exists_levels, sub, m - 1, out);
    }
}

/// Completes a valid m-selection into an m-tree: the selected nodes keep
/// their elements, and under each selected leaf position the two original
/// branches below it become the new branches. The new branch string reads
/// off, per selection level, which child cone the path descended into.
pub fn complete_subtree(t: &PhiTree, s: &SubtreeSelection) -> Result<PhiTree> {
    if !validate_subtree(t, s) {
        return Err(Error::InvalidSubtree(format!(
            "claimed height {} with {} positions rooted at {}",
            s.claimed_height,
            s.positions.len(),
            pos_to_bits(s.root)
        )));
    }
    let m = s.claimed_height;
    let mut node_out = vec![0usize; 1 << m];
    let mut branch_out = vec![0usize; 1 << m];
    fill_completion(t, s, 1, m, &mut node_out, &mut branch_out);
    PhiTree::new(m, branch_out, node_out, t.relation_arc())
}

fn fill_completion(
    t: &PhiTree,
    s: &SubtreeSelection,
    new_pos: usize,
    m: usize,
    node_out: &mut [usize],
    branch_out: &mut [usize],
) {
    node_out[new_pos] = t.node_elem(s.root);
    let new_height = node_out.len().trailing_zeros() as usize;
    if m == 1 {
        // s.root is an original leaf; its two child positions are branches.
        let old_offset = 2 * s.root - (1 << t.height());
        for j in 0..2 {
            let new_branch_pos = 2 * new_pos + j;
            branch_out[new_branch_pos - (1 << new_height)] = t.branch_elem(old_offset + j);
        }
        return;
    }
    let (_, c0, c1) = split_selection(s);
    fill_completion(t, &c0, 2 * new_pos, m - 1, node_out, branch_out);
    fill_completion(t, &c1, 2 * new_pos + 1, m - 1, node_out, branch_out);
}

/// Which class of the node partition a split outcome lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitClass {
    P,
    Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamseyOutcome {
    pub side: SplitClass,
    pub selection: SubtreeSelection,
}

/// Splits a (p+q)-tree's node partition: returns a p-subtree inside P if
/// one exists (tried first, so the outcome is deterministic), else a
/// q-subtree inside Q, else the violation error. Most partitions admit one
/// side or the other, but not all: a class holding every leaf and no
/// internal node blocks heights >= 2 on both sides, so the error is a real
/// (if degenerate) outcome, not just a defensive assertion. `p` and `q`
/// must both be at least 1.
pub fn ramsey_split(
    t: &PhiTree,
    p_class: &FixedBitSet,
    q_class: &FixedBitSet,
    p: usize,
    q: usize,
) -> Result<RamseyOutcome> {
    assert!(p >= 1 && q >= 1, "both class heights must be at least 1");
    if p + q != t.height() {
        return Err(Error::BadHeight {
            got: t.height(),
            want: p + q,
        });
    }
    if p_class.len() < t.node_end() || q_class.len() < t.node_end() {
        return Err(Error::BadPartition(
            "class sets must cover all node positions".into(),
        ));
    }
    for pos in 1..t.node_end() {
        if p_class.contains(pos) == q_class.contains(pos) {
            return Err(Error::BadPartition(format!(
                "position {} is in {}",
                pos_to_bits(pos),
                if p_class.contains(pos) {
                    "both classes"
                } else {
                    "neither class"
                }
            )));
        }
    }
    if let Some(selection) = find_subtree(t, p_class, p) {
        return Ok(RamseyOutcome {
            side: SplitClass::P,
            selection,
        });
    }
    if let Some(selection) = find_subtree(t, q_class, q) {
        return Ok(RamseyOutcome {
            side: SplitClass::Q,
            selection,
        });
    }
    Err(Error::SplitViolation)
}

/// The full cone below one child of the root, as a (height-1)-selection.
fn full_cone_selection(t: &PhiTree, child: usize) -> SubtreeSelection {
    let top = 2 + child;
    let mut positions = BTreeSet::new();
    let mut stack = vec![top];
    while let Some(p) = stack.pop() {
        if p < t.node_end() {
            positions.insert(p);
            stack.push(2 * p);
            stack.push(2 * p + 1);
        }
    }
    SubtreeSelection {
        positions,
        claimed_height: t.height() - 1,
        root: top,
    }
}

/// Extracts a height-n half-graph witness from a valid tree of height
/// exactly `2^(n+1) - 2`.
///
/// The search keeps a current tree `H` plus two pair lists. Each round
/// either finds a branch `a` whose related node set contains a subtree of
/// just over half `H`'s height (then `(a, root-of-that-subtree)` joins the
/// left pairs and `H` shrinks to the subtree's 1-cone part), or, failing
/// that, splits the root's 0-cone by relatedness to its first branch and
/// takes a subtree on the unrelated side (then `(a, root)` joins the right
/// pairs). The final height-2 tree yields the middle pair.
///
/// The second case can fail on contrived relations whose unrelated sides
/// are leaf-free; that surfaces as the split-violation error. Trees with
/// random unconstrained bits never hit it in practice.
pub fn extract_halfgraph(t: &PhiTree, n: usize) -> Result<HalfGraphWitness> {
    assert!(n >= 1);
    let want = (1 << (n + 1)) - 2;
    if t.height() != want {
        return Err(Error::BadHeight {
            got: t.height(),
            want,
        });
    }
    if !validate_tree(t) {
        return Err(Error::InvalidTree(
            "the defining pattern does not hold".into(),
        ));
    }

    let mut h_tree = t.clone();
    let mut left: Vec<(usize, usize)> = Vec::new();
    let mut right: std::collections::VecDeque<(usize, usize)> = std::collections::VecDeque::new();

    for r in (2..=n).rev() {
        let h = (1 << r) - 2;
        debug_assert_eq!(h_tree.height(), 2 * h + 2);

        match find_rich_branch(&h_tree, h + 1) {
            Some((a_offset, selection)) => {
                // The found (h+1)-subtree sits inside the node set related
                // to branch a; keep its 1-cone part as the next tree.
                let a_elem = h_tree.branch_elem(a_offset);
                let b_elem = h_tree.node_elem(selection.root);
                let (_, _, c1) = split_selection(&selection);
                let next = complete_subtree(&h_tree, &c1)?;
                left.push((a_elem, b_elem));
                h_tree = next;
            }
            None => {
                // No branch is related to a subtree that tall; split the
                // 0-cone of the root by relatedness to its first branch.
                // The unrelated side goes first and is the success path.
                let b_elem = h_tree.node_elem(1);
                let cone = complete_subtree(&h_tree, &full_cone_selection(&h_tree, 0))?;
                let a_elem = cone.branch_elem(0);
                let end = cone.node_end();
                let mut unrelated = FixedBitSet::with_capacity(end);
                let mut related = FixedBitSet::with_capacity(end);
                for pos in 1..end {
                    if cone.holds(0, pos) {
                        related.insert(pos);
                    } else {
                        unrelated.insert(pos);
                    }
                }
                let outcome = ramsey_split(&cone, &unrelated, &related, h, h + 1)?;
                if outcome.side != SplitClass::P {
                    // A related subtree of the cone is a related subtree of
                    // the whole tree, which the scan above ruled out.
                    return Err(Error::SplitViolation);
                }
                let next = complete_subtree(&cone, &outcome.selection)?;
                right.push_front((a_elem, b_elem));
                h_tree = next;
            }
        }
    }

    debug_assert_eq!(h_tree.height(), 2);
    let mid = (h_tree.branch_elem(0), h_tree.node_elem(1));

    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for &(x, y) in &left {
        a.push(x);
        b.push(y);
    }
    a.push(mid.0);
    b.push(mid.1);
    for &(x, y) in &right {
        a.push(x);
        b.push(y);
    }

    let w = HalfGraphWitness::new(a, b);
    if !verify_witness(t.relation(), &w)? {
        return Err(Error::InvalidWitness(
            "extraction produced a non-witness; the input tree is inconsistent".into(),
        ));
    }
    Ok(w)
}

/// Finds the least branch offset whose related node set contains an
/// m-subtree, along with that subtree (deterministic reconstruction).
///
/// The feasibility pass is run for all branches at once: per node position
/// the admissible-branch set is a bit set, and the subtree recurrence is
/// three bitwise ops per position and level.
fn find_rich_branch(t: &PhiTree, m: usize) -> Option<(usize, SubtreeSelection)> {
    let end = t.node_end();
    let nb = t.branch_count();

    // adj[pos] = branches related to the node at pos.
    let mut adj: Vec<FixedBitSet> = Vec::with_capacity(end);
    adj.push(FixedBitSet::with_capacity(nb));
    for pos in 1..end {
        let col = t.relation().col(t.node_elem(pos));
        let mut set = FixedBitSet::with_capacity(nb);
        for o in 0..nb {
            if col.contains(t.branch_elem(o)) {
                set.insert(o);
            }
        }
        adj.push(set);
    }

    // Levelwise exists/reach with branch-indexed bit sets.
    let mut reach_prev: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(nb); end];
    let mut scratch = FixedBitSet::with_capacity(nb);
    let mut top_exists = FixedBitSet::with_capacity(nb);
    for level in 1..=m {
        let mut reach: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(nb); end];
        for pos in (1..end).rev() {
            let leaf = t.is_leaf(pos);
            let exists: Option<&FixedBitSet> = if level == 1 {
                if leaf {
                    Some(&adj[pos])
                } else {
                    None
                }
            } else if leaf {
                None
            } else {
                scratch.clone_from(&adj[pos]);
                scratch.intersect_with(&reach_prev[2 * pos]);
                scratch.intersect_with(&reach_prev[2 * pos + 1]);
                Some(&scratch)
            };
            let mut r = match exists {
                Some(e) => e.clone(),
                None => FixedBitSet::with_capacity(nb),
            };
            if level == m {
                top_exists.union_with(&r);
            }
            if !leaf {
                r.union_with(&reach[2 * pos]);
                r.union_with(&reach[2 * pos + 1]);
            }
            reach[pos] = r;
        }
        reach_prev = reach;
    }

    let a_offset = top_exists.minimum()?;
    let mut allowed = FixedBitSet::with_capacity(end);
    for pos in 1..end {
        if adj[pos].contains(a_offset) {
            allowed.insert(pos);
        }
    }
    let selection =
        find_subtree(t, &allowed, m).expect("the joint feasibility pass found this branch");
    Some((a_offset, selection))
}

/// Result of searching a graph for a tree of a given height.
#[derive(Debug, Clone)]
pub enum GrowOutcome {
    Found(PhiTree),
    /// `exhaustive` is true when the whole search space was covered, so no
    /// tree of that height exists; false when the step budget ran out first.
    NotFound { exhaustive: bool },
}

/// Searches `g` for a tree of the target height with branches from the left
/// side and nodes from the right. Backtracking over node elements; at each
/// position the remaining branch candidates split into the node's neighbors
/// (0-cone) and non-neighbors (1-cone). Deterministic: node elements are
/// tried in ascending order and the least viable branch is taken at each
/// cell.
pub fn grow_tree(g: &BipartiteGraph, target_height: usize) -> GrowOutcome {
    assert!(target_height >= 1);
    let nb = 1usize << target_height;
    if nb > g.left_size() {
        // Branches are forced pairwise distinct.
        return GrowOutcome::NotFound { exhaustive: true };
    }
    let space = pow_saturating(g.right_size() as u128, (nb - 1) as u32);
    let cap = if space <= enumeration_budget() {
        u128::MAX
    } else {
        enumeration_budget()
    };

    let mut node_out = vec![0usize; nb];
    let mut branch_out = vec![0usize; nb];
    let mut all = FixedBitSet::with_capacity(g.left_size());
    all.insert_range(..);
    let mut steps = 0u128;
    let found = grow_rec(
        g,
        &all,
        1,
        target_height,
        &mut node_out,
        &mut branch_out,
        &mut steps,
        cap,
    );
    match found {
        GrowStep::Found => {
            let tree = PhiTree::new(target_height, branch_out, node_out, g.clone())
                .expect("search assigns every position in range");
            GrowOutcome::Found(tree)
        }
        GrowStep::Exhausted => GrowOutcome::NotFound { exhaustive: true },
        GrowStep::Budget => GrowOutcome::NotFound { exhaustive: false },
    }
}

enum GrowStep {
    Found,
    Exhausted,
    Budget,
}

#[allow(clippy::too_many_arguments)]
fn grow_rec(
    g: &BipartiteGraph,
    cands: &FixedBitSet,
    pos: usize,
    height: usize,
    node_out: &mut [usize],
    branch_out: &mut [usize],
    steps: &mut u128,
    cap: u128,
) -> GrowStep {
    let depth = pos_depth(pos);
    if depth == height {
        // Branch cell: any candidate works; take the least.
        branch_out[pos - (1 << height)] = cands.minimum().expect("caller checked candidates");
        return GrowStep::Found;
    }
    let need = 1usize << (height - depth - 1);
    for v in 0..g.right_size() {
        *steps += 1;
        if *steps > cap {
            return GrowStep::Budget;
        }
        let mut c0 = cands.clone();
        c0.intersect_with(g.col(v));
        if c0.count_ones(..) < need {
            continue;
        }
        let mut c1 = cands.clone();
        c1.difference_with(g.col(v));
        if c1.count_ones(..) < need {
            continue;
        }
        node_out[pos] = v;
        match grow_rec(g, &c0, 2 * pos, height, node_out, branch_out, steps, cap) {
            GrowStep::Found => {}
            GrowStep::Exhausted => continue,
            GrowStep::Budget => return GrowStep::Budget,
        }
        match grow_rec(g, &c1, 2 * pos + 1, height, node_out, branch_out, steps, cap) {
            GrowStep::Found => return GrowStep::Found,
            GrowStep::Exhausted => continue,
            GrowStep::Budget => return GrowStep::Budget,
        }
    }
    GrowStep::Exhausted
}

/// Generates a valid tree of height `n` over a synthetic relation:
/// `2^n + universe_padding` left elements, `2^n - 1 + universe_padding`
/// right elements, the defining pattern wired in, and every unconstrained
/// pair decided by a seeded coin flip. Deterministic per seed.
pub fn gen_random_tree(n: usize, seed: u64, universe_padding: usize) -> PhiTree {
    assert!(n >= 1);
    let nb = 1usize << n;
    let left = nb + universe_padding;
    let right = nb - 1 + universe_padding;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut rows: Vec<FixedBitSet> = (0..left).map(|_| random_bitset(&mut rng, right)).collect();
    let branch_elem: Vec<usize> = (0..nb).collect();
    let mut node_elem = vec![0usize; nb];
    for pos in 1..nb {
        node_elem[pos] = pos - 1;
    }
    for (o, row) in rows.iter_mut().enumerate().take(nb) {
        let mut pos = 1usize;
        for i in 0..n {
            let bit = o >> (n - 1 - i) & 1;
            row.set(node_elem[pos], bit == 0);
            pos = 2 * pos + bit;
        }
    }
    let relation = BipartiteGraph::from_rows(left, right, rows);
    PhiTree::new(n, branch_elem, node_elem, relation).expect("generated entries are in range")
}

/// A bit set with `bits` uniformly random entries, word-filled.
fn random_bitset(rng: &mut ChaCha8Rng, bits: usize) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(bits);
    for w in set.as_mut_slice().iter_mut() {
        *w = rng.gen::<u64>() as usize;
    }
    // Clear the padding past the bit length; the container's iterators and
    // counts assume those bits are zero.
    if bits % usize::BITS as usize != 0 {
        if let Some(last) = set.as_mut_slice().last_mut() {
            *last &= (1usize << (bits % usize::BITS as usize)) - 1;
        }
    }
    set
}
