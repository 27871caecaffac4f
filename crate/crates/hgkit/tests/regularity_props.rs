//! Regularity checks on planted block structure: the homogeneity verdict's
//! exact thresholds, planted partitions passing, and the greedy refiner
//! recovering block structure with few witnesses.

use hgkit::bigraph::{
    is_eps_homogeneous, BipartiteGraph, HomogeneityKind, Side, VertexSet,
};
use hgkit::gen::{gen_biclique_union, gen_canonical_halfgraph};
use hgkit::regularity::{
    check_partition, exhaustive_min_partition, greedy_regularize, RegularityPartition,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{seq::SliceRandom, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Left and right part id lists for the planted diagonal blocks, with an
/// empty exceptional part in front.
fn planted_parts(blocks: &[(usize, usize)]) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut left = vec![Vec::new()];
    let mut right = vec![Vec::new()];
    let (mut u, mut v) = (0, 0);
    for &(l, r) in blocks {
        left.push((u..u + l).collect());
        right.push((v..v + r).collect());
        u += l;
        v += r;
    }
    (left, right)
}

const BLOCK_CONFIGS: &[&[(usize, usize)]] = &[
    &[(3, 2)],
    &[(2, 2), (2, 2)],
    &[(3, 1), (1, 3), (2, 2)],
    &[(2, 3), (3, 2), (1, 1), (4, 4)],
    &[(8, 8), (8, 8)],
];

#[test]
fn planted_partitions_pass_with_homogeneous_cells() {
    let eps = ratio(1, 10);
    for blocks in BLOCK_CONFIGS {
        let g = gen_biclique_union(blocks, &BigRational::zero(), 0).unwrap();
        let (left, right) = planted_parts(blocks);
        let p = RegularityPartition::from_ids(&g, &left, &right).unwrap();
        let report = check_partition(&g, &p, &eps, &BigRational::zero()).unwrap();
        assert!(report.pass, "{blocks:?}");
        for row in &report.grid {
            for verdict in row {
                assert_ne!(verdict.kind, HomogeneityKind::Neither, "{blocks:?}");
            }
        }
    }
}

#[test]
fn greedy_recovers_block_structure_with_few_witnesses() {
    let eps = ratio(1, 10);
    for blocks in BLOCK_CONFIGS {
        let g = gen_biclique_union(blocks, &BigRational::zero(), 0).unwrap();
        let out = greedy_regularize(&g, &eps, &BigRational::zero(), blocks.len()).unwrap();
        assert!(out.report.pass, "{blocks:?}");
        assert!(out.left_witnesses.len() <= blocks.len(), "{blocks:?}");
        assert!(out.right_witnesses.len() <= blocks.len(), "{blocks:?}");
    }
}

#[test]
fn exhaustive_search_finds_the_planted_pair_partition() {
    let g = gen_biclique_union(&[(2, 2), (2, 2)], &BigRational::zero(), 0).unwrap();
    let (p, r, s) = exhaustive_min_partition(&g, &ratio(1, 10), &BigRational::zero(), 4)
        .unwrap()
        .expect("a passing partition exists");
    assert_eq!((r, s), (2, 2));
    let mut left: Vec<Vec<usize>> = p.left_parts[1..].iter().map(|v| v.ids()).collect();
    let mut right: Vec<Vec<usize>> = p.right_parts[1..].iter().map(|v| v.ids()).collect();
    left.sort();
    right.sort();
    assert_eq!(left, vec![vec![0, 1], vec![2, 3]]);
    assert_eq!(right, vec![vec![0, 1], vec![2, 3]]);
}

#[test]
fn homogeneity_verdict_on_the_two_step_graph() {
    let g = gen_canonical_halfgraph(2);
    let x = VertexSet::full(Side::Left, 2);
    let y = VertexSet::full(Side::Right, 2);
    let v = is_eps_homogeneous(&g, &x, &y, &ratio(1, 10)).unwrap();
    assert_eq!(v.kind, HomogeneityKind::Neither);
    assert_eq!(v.edge_count, 3);
    assert_eq!(v.box_size, 4);
    assert_eq!(v.threshold, ratio(81, 25));
}

#[test]
fn boundary_count_is_judged_dense() {
    // Exactly (1 - eps)^2 |X x Y| edges meets the threshold: the
    // comparison is at-least, not strictly-greater. One edge in a 2x2 box
    // at eps = 1/2 sits exactly on (1/2)^2 * 4 = 1.
    let g = BipartiteGraph::from_fn(2, 2, |u, v| u == 0 && v == 0);
    let x = VertexSet::full(Side::Left, 2);
    let y = VertexSet::full(Side::Right, 2);
    let v = is_eps_homogeneous(&g, &x, &y, &ratio(1, 2)).unwrap();
    assert_eq!(v.threshold, ratio(1, 1));
    assert_eq!(v.edge_count, 1);
    assert_eq!(v.kind, HomogeneityKind::EdgeDense);
}

#[test]
fn complementing_the_graph_swaps_the_verdict() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..40 {
        let g = {
            use rand::Rng;
            let l = rng.gen_range(1..=6);
            let r = rng.gen_range(1..=6);
            BipartiteGraph::from_fn(l, r, |_, _| rng.gen_bool(0.3))
        };
        let x = VertexSet::full(Side::Left, g.left_size());
        let y = VertexSet::full(Side::Right, g.right_size());
        let eps = ratio(1, 4);
        let v = is_eps_homogeneous(&g, &x, &y, &eps).unwrap();
        let vc = is_eps_homogeneous(&g.complement(), &x, &y, &eps).unwrap();
        assert_eq!(v.box_size, vc.box_size);
        assert_eq!(v.edge_count + vc.edge_count, v.box_size);
        let swapped = match v.kind {
            HomogeneityKind::EdgeDense => HomogeneityKind::NonedgeDense,
            HomogeneityKind::NonedgeDense => HomogeneityKind::EdgeDense,
            HomogeneityKind::Neither => HomogeneityKind::Neither,
        };
        // Both-dense boxes resolve to EdgeDense on each side; everything
        // else swaps cleanly. Both-dense requires both counts over
        // threshold, impossible once threshold exceeds half the box.
        if v.edge_count * 2 != v.box_size {
            assert_eq!(vc.kind, swapped);
        }
    }
}

#[test]
fn relabeling_vertices_relabels_the_report() {
    let blocks: &[(usize, usize)] = &[(3, 2), (2, 3)];
    let g = gen_biclique_union(blocks, &BigRational::zero(), 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut perm_l: Vec<usize> = (0..g.left_size()).collect();
    let mut perm_r: Vec<usize> = (0..g.right_size()).collect();
    perm_l.shuffle(&mut rng);
    perm_r.shuffle(&mut rng);
    let g2 = BipartiteGraph::from_fn(g.left_size(), g.right_size(), |u, v| {
        g.has_edge(perm_l[u], perm_r[v])
    });
    let mut inv_l = vec![0; perm_l.len()];
    let mut inv_r = vec![0; perm_r.len()];
    for (i, &x) in perm_l.iter().enumerate() {
        inv_l[x] = i;
    }
    for (i, &x) in perm_r.iter().enumerate() {
        inv_r[x] = i;
    }
    let (left, right) = planted_parts(blocks);
    let map = |groups: &[Vec<usize>], inv: &[usize]| -> Vec<Vec<usize>> {
        groups
            .iter()
            .map(|ids| ids.iter().map(|&x| inv[x]).collect())
            .collect()
    };
    let p1 = RegularityPartition::from_ids(&g, &left, &right).unwrap();
    let p2 = RegularityPartition::from_ids(&g2, &map(&left, &inv_l), &map(&right, &inv_r)).unwrap();
    let eps = ratio(1, 10);
    let r1 = check_partition(&g, &p1, &eps, &BigRational::zero()).unwrap();
    let r2 = check_partition(&g2, &p2, &eps, &BigRational::zero()).unwrap();
    assert_eq!(r1, r2);
}

#[test]
fn delta_governs_the_exceptional_budget() {
    // Place one left vertex in the exceptional part: rejected at delta
    // 1/10 of 8, allowed at 1/4.
    let blocks: &[(usize, usize)] = &[(4, 4), (4, 4)];
    let g = gen_biclique_union(blocks, &BigRational::zero(), 0).unwrap();
    let left = vec![vec![0], (1..4).collect(), (4..8).collect()];
    let right = vec![vec![], (0..4).collect(), (4..8).collect()];
    let p = RegularityPartition::from_ids(&g, &left, &right).unwrap();
    let eps = ratio(1, 10);
    let tight = check_partition(&g, &p, &eps, &ratio(1, 10)).unwrap();
    assert!(!tight.left_exceptional_ok);
    assert!(!tight.pass);
    let loose = check_partition(&g, &p, &eps, &ratio(1, 4)).unwrap();
    assert!(loose.left_exceptional_ok);
    assert!(loose.pass);
}
