//! Exhaustive and seeded checks of the tree calculus: subtree selection,
//! completion, the split of a node partition, extraction, and growth.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use hgkit::bigraph::BipartiteGraph;
use hgkit::gen::gen_canonical_halfgraph;
use hgkit::halfgraph::{find_halfgraph, verify_witness};
use hgkit::tree::{
    complete_subtree, extract_halfgraph, gen_random_tree, grow_tree, ramsey_split,
    validate_subtree, validate_tree, GrowOutcome, PhiTree, SplitClass, SubtreeSelection,
};
use hgkit::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All heap positions in the cone below `root` of a height-`h` tree.
fn cone_nodes(h: usize, root: usize) -> Vec<usize> {
    let node_end = 1usize << h;
    let mut out = Vec::new();
    let mut frontier = vec![root];
    while let Some(p) = frontier.pop() {
        if p >= node_end {
            continue;
        }
        out.push(p);
        frontier.push(2 * p);
        frontier.push(2 * p + 1);
    }
    out.sort_unstable();
    out
}

/// Independent enumerator: every m-subtree position set inside the cone at
/// `cone_root`. A 1-subtree is a single tree leaf; an m-subtree is an
/// internal root plus an (m-1)-subtree in each child cone. Each set is
/// produced exactly once because the root determines the decomposition.
fn enumerate_subtrees(h: usize, cone_root: usize, m: usize) -> Vec<BTreeSet<usize>> {
    let leaf_start = 1usize << (h - 1);
    if m == 1 {
        return cone_nodes(h, cone_root)
            .into_iter()
            .filter(|&p| p >= leaf_start)
            .map(|p| BTreeSet::from([p]))
            .collect();
    }
    let mut out = Vec::new();
    for p in cone_nodes(h, cone_root) {
        if p >= leaf_start {
            continue;
        }
        for left in enumerate_subtrees(h, 2 * p, m - 1) {
            for right in enumerate_subtrees(h, 2 * p + 1, m - 1) {
                let mut s = BTreeSet::from([p]);
                s.extend(left.iter().copied());
                s.extend(right.iter().copied());
                out.push(s);
            }
        }
    }
    out
}

fn selection_from_set(m: usize, set: &BTreeSet<usize>) -> SubtreeSelection {
    // Positions at smaller depth are numerically smaller than any deeper
    // position, so the minimum is the root.
    SubtreeSelection {
        positions: set.clone(),
        claimed_height: m,
        root: *set.iter().next().unwrap(),
    }
}

/// Deepest common ancestor of two heap positions.
fn meet(mut a: usize, mut b: usize) -> usize {
    while a != b {
        if a > b {
            a >>= 1;
        } else {
            b >>= 1;
        }
    }
    a
}

#[test]
fn subtree_counts_on_height_four() {
    assert_eq!(enumerate_subtrees(4, 1, 1).len(), 8);
    assert_eq!(enumerate_subtrees(4, 1, 2).len(), 28);
    assert_eq!(enumerate_subtrees(4, 1, 3).len(), 38);
    assert_eq!(enumerate_subtrees(4, 1, 4).len(), 1);
    assert_eq!(enumerate_subtrees(4, 1, 5).len(), 0);
}

#[test]
fn enumerated_subtrees_validate_and_complete() {
    for seed in 0..20u64 {
        let t = gen_random_tree(4, seed, 2);
        assert!(validate_tree(&t));
        for m in 1..=4usize {
            for set in enumerate_subtrees(4, 1, m) {
                let sel = selection_from_set(m, &set);
                assert!(validate_subtree(&t, &sel), "seed {seed} m {m} {set:?}");

                // The internal positions are exactly the meets of
                // consecutive leaves, each realized once.
                let leaves: Vec<usize> =
                    set.iter().copied().filter(|&p| p >= 8).collect();
                let internals: BTreeSet<usize> =
                    set.iter().copied().filter(|&p| p < 8).collect();
                let meets: BTreeSet<usize> = leaves
                    .windows(2)
                    .map(|w| meet(w[0], w[1]))
                    .collect();
                assert_eq!(meets, internals, "seed {seed} m {m}");
                assert_eq!(leaves.len(), internals.len() + 1);

                let sub = complete_subtree(&t, &sel).unwrap();
                assert_eq!(sub.height(), m);
                assert!(validate_tree(&sub), "seed {seed} m {m} {set:?}");
            }
        }
    }
}

#[test]
fn corrupted_selections_are_rejected() {
    let t = gen_random_tree(4, 3, 0);
    let set = &enumerate_subtrees(4, 1, 3)[0];
    let good = selection_from_set(3, set);
    assert!(validate_subtree(&t, &good));

    let mut wrong_height = good.clone();
    wrong_height.claimed_height = 2;
    assert!(!validate_subtree(&t, &wrong_height));

    let mut missing_root = good.clone();
    missing_root.positions.remove(&good.root);
    assert!(!validate_subtree(&t, &missing_root));

    let mut extra = good.clone();
    extra.positions.insert(1);
    assert!(!validate_subtree(&t, &extra) || good.positions.contains(&1));

    // A root-only "2-subtree" whose leaves are internal positions violates
    // the rule that 1-subtrees are tree leaves.
    let internal_pair = SubtreeSelection {
        positions: BTreeSet::from([1, 2, 3]),
        claimed_height: 2,
        root: 1,
    };
    assert!(!validate_subtree(&t, &internal_pair));
}

fn classes_from_mask(node_end: usize, mask: u64) -> (FixedBitSet, FixedBitSet) {
    let mut p = FixedBitSet::with_capacity(node_end);
    let mut q = FixedBitSet::with_capacity(node_end);
    for pos in 1..node_end {
        if mask >> (pos - 1) & 1 == 1 {
            p.insert(pos);
        } else {
            q.insert(pos);
        }
    }
    (p, q)
}

fn assert_outcome_valid(
    t: &PhiTree,
    p_class: &FixedBitSet,
    q_class: &FixedBitSet,
    p: usize,
    q: usize,
    outcome: &hgkit::tree::RamseyOutcome,
) {
    let (class, want_height) = match outcome.side {
        SplitClass::P => (p_class, p),
        SplitClass::Q => (q_class, q),
    };
    assert_eq!(outcome.selection.claimed_height, want_height);
    assert!(validate_subtree(t, &outcome.selection));
    for &pos in &outcome.selection.positions {
        assert!(class.contains(pos), "position {pos} outside claimed class");
    }
}

#[test]
fn split_succeeds_on_all_two_tree_partitions() {
    for seed in 0..5u64 {
        let t = gen_random_tree(2, seed, 1);
        for mask in 0..8u64 {
            let (p, q) = classes_from_mask(4, mask);
            let out = ramsey_split(&t, &p, &q, 1, 1).unwrap();
            assert_outcome_valid(&t, &p, &q, 1, 1, &out);
        }
    }
}

#[test]
fn split_on_three_trees_fails_only_for_the_degenerate_partition() {
    // Splitting (1,2) over a height-3 tree succeeds for 127 of the 128
    // partitions. The one exception puts every internal node in P and
    // every leaf in Q: P then has no leaf for its 1-subtree and Q no
    // internal root for its 2-subtree. Mirrored for (2,1).
    for seed in 0..10u64 {
        let t = gen_random_tree(3, seed, 1);
        for (p, q, bad_mask) in [(1usize, 2usize, 0b0000111u64), (2, 1, 0b1111000)] {
            let mut failures = Vec::new();
            for mask in 0..128u64 {
                let (pc, qc) = classes_from_mask(8, mask);
                match ramsey_split(&t, &pc, &qc, p, q) {
                    Ok(out) => assert_outcome_valid(&t, &pc, &qc, p, q, &out),
                    Err(Error::SplitViolation) => failures.push(mask),
                    Err(other) => panic!("unexpected error {other}"),
                }
            }
            assert_eq!(failures, vec![bad_mask], "seed {seed} p {p} q {q}");
        }
    }
}

#[test]
fn split_succeeds_on_random_five_tree_partitions() {
    let t = gen_random_tree(5, 77, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(520);
    for round in 0..1000 {
        let mask: u64 = rng.gen::<u64>() & ((1 << 31) - 1);
        let (p, q) = classes_from_mask(32, mask);
        let out = ramsey_split(&t, &p, &q, 2, 3)
            .unwrap_or_else(|e| panic!("round {round} mask {mask:#b}: {e}"));
        assert_outcome_valid(&t, &p, &q, 2, 3, &out);
    }
}

#[test]
fn extraction_succeeds_on_random_trees() {
    // Height 2^(n+1) - 2 guarantees a height-n half-graph in the relation.
    for seed in 0..100u64 {
        let t = gen_random_tree(2, seed, seed as usize % 3);
        let w = extract_halfgraph(&t, 1).unwrap();
        assert_eq!(w.k(), 1);
        assert!(verify_witness(t.relation(), &w).unwrap());
    }
    for seed in 0..40u64 {
        let t = gen_random_tree(6, seed, seed as usize % 3);
        let w = extract_halfgraph(&t, 2).unwrap();
        assert_eq!(w.k(), 2);
        assert!(verify_witness(t.relation(), &w).unwrap());
    }
}

#[test]
fn extraction_succeeds_at_height_fourteen() {
    for seed in [9u64, 10] {
        let t = gen_random_tree(14, seed, 3);
        let w = extract_halfgraph(&t, 3).unwrap();
        assert_eq!(w.k(), 3);
        assert!(verify_witness(t.relation(), &w).unwrap());
    }
}

#[test]
fn extraction_rejects_wrong_heights() {
    let t = gen_random_tree(3, 0, 0);
    match extract_halfgraph(&t, 1) {
        Err(Error::BadHeight { got: 3, want: 2 }) => {}
        other => panic!("expected BadHeight, got {other:?}"),
    }
}

#[test]
fn growth_implies_halfgraph_on_all_three_by_three_graphs() {
    let mut grown = 0;
    for mask in 0..512u32 {
        let g = BipartiteGraph::from_fn(3, 3, |u, v| mask >> (u * 3 + v) & 1 == 1);
        match grow_tree(&g, 1) {
            GrowOutcome::Found(t) => {
                grown += 1;
                assert!(validate_tree(&t));
                assert_eq!(t.height(), 1);
                assert!(find_halfgraph(&g, 1).is_some(), "mask {mask}");
            }
            GrowOutcome::NotFound { exhaustive } => assert!(exhaustive),
        }
        // Four pairwise-distinct branches cannot fit on three vertices.
        match grow_tree(&g, 2) {
            GrowOutcome::NotFound { exhaustive: true } => {}
            _ => panic!("mask {mask}: height-2 growth should be exhausted"),
        }
    }
    // A height-1 tree needs a column with both an edge and a non-edge;
    // most masks have one.
    assert!(grown > 256, "only {grown} of 512 grew");
}

#[test]
fn growth_finds_tree_in_canonical_graph() {
    let g = gen_canonical_halfgraph(4);
    match grow_tree(&g, 2) {
        GrowOutcome::Found(t) => {
            assert!(validate_tree(&t));
            assert_eq!(t.height(), 2);
            // A height-2 tree feeds extraction at n = 1.
            let w = extract_halfgraph(&t, 1).unwrap();
            assert!(verify_witness(t.relation(), &w).unwrap());
        }
        GrowOutcome::NotFound { .. } => panic!("canonical graph carries a height-2 tree"),
    }
}

#[test]
fn generated_trees_validate() {
    for n in 1..=6 {
        for seed in 0..5u64 {
            for pad in [0, 2] {
                assert!(validate_tree(&gen_random_tree(n, seed, pad)));
            }
        }
    }
}
