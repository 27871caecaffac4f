//! Finite groups from multiplication tables, their relation graphs, and
//! coset-union approximation of subsets.
//!
//! Element ids are 0..order. Two bipartite relations are derived from a
//! group and a subset A: the translation relation with an edge (g, h) iff
//! g^-1 h is in A, and the product relation with an edge (x, y) iff y x is
//! in A. Ordered half-graph witnesses transfer between the two through an
//! index-reversing bijection.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bigraph::BipartiteGraph;
use crate::error::{Error, Result};
use crate::halfgraph::{verify_witness, HalfGraphWitness};

/// Largest order for which associativity is verified over all triples at
/// construction; larger tables get seeded sampling and a cleared
/// `associativity_verified` flag.
pub const FULL_ASSOCIATIVITY_CAP: usize = 256;
/// Triples sampled when the order exceeds the full-check cap.
const ASSOC_SAMPLES: usize = 4096;
const ASSOC_SAMPLE_SEED: u64 = 0x5eed_a50c;

/// Hard cap for normal-subgroup enumeration input size.
pub const NORMAL_ENUM_ORDER_CAP: usize = 256;
/// Defensive cap on the number of normal subgroups collected (elementary
/// abelian inputs can have combinatorially many).
pub const NORMAL_ENUM_LATTICE_CAP: usize = 10_000;

/// A validated finite group: total multiplication table, resolved identity
/// and inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    /// Row-major: `table[a * order + b]` is the product a*b.
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    associativity_verified: bool,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// False when the order exceeded the full-check cap and associativity
    /// was only sampled.
    pub fn associativity_verified(&self) -> bool {
        self.associativity_verified
    }
}

/// A packed subset of a group's elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSubset {
    pub members: FixedBitSet,
}

impl GroupSubset {
    pub fn empty(order: usize) -> GroupSubset {
        GroupSubset {
            members: FixedBitSet::with_capacity(order),
        }
    }

    pub fn full(order: usize) -> GroupSubset {
        let mut members = FixedBitSet::with_capacity(order);
        members.insert_range(..);
        GroupSubset { members }
    }

    pub fn from_ids(order: usize, ids: &[usize]) -> Result<GroupSubset> {
        let mut members = FixedBitSet::with_capacity(order);
        for &id in ids {
            if id >= order {
                return Err(Error::OutOfRange {
                    what: "group element",
                    id,
                    bound: order,
                });
            }
            members.insert(id);
        }
        Ok(GroupSubset { members })
    }

    pub fn ids(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn count(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn contains(&self, id: usize) -> bool {
        self.members.contains(id)
    }
}

/// Validates a multiplication table: every row and column a permutation,
/// a two-sided identity, two-sided inverses, and associativity (all triples
/// up to the cap, seeded samples beyond it).
pub fn validate_group(table: &[Vec<usize>]) -> Result<FiniteGroup> {
    let n = table.len();
    if n == 0 {
        return Err(Error::NotLatinSquare("empty table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotLatinSquare(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for &x in row {
            if x >= n {
                return Err(Error::NotLatinSquare(format!(
                    "row {i} contains {x}, out of range for order {n}"
                )));
            }
        }
    }
    let flat: Vec<usize> = table.iter().flatten().copied().collect();
    for i in 0..n {
        let mut seen_row = vec![false; n];
        let mut seen_col = vec![false; n];
        for j in 0..n {
            let r = flat[i * n + j];
            if seen_row[r] {
                return Err(Error::NotLatinSquare(format!("row {i} repeats {r}")));
            }
            seen_row[r] = true;
            let c = flat[j * n + i];
            if seen_col[c] {
                return Err(Error::NotLatinSquare(format!("column {i} repeats {c}")));
            }
            seen_col[c] = true;
        }
    }

    let identity = (0..n)
        .find(|&e| (0..n).all(|a| flat[e * n + a] == a && flat[a * n + e] == a))
        .ok_or(Error::NoIdentity)?;

    let mut inverse = vec![usize::MAX; n];
    for a in 0..n {
        let b = (0..n)
            .find(|&b| flat[a * n + b] == identity && flat[b * n + a] == identity)
            .ok_or(Error::NoInverse(a))?;
        inverse[a] = b;
    }

    let assoc = |a: usize, b: usize, c: usize| {
        flat[flat[a * n + b] * n + c] == flat[a * n + flat[b * n + c]]
    };
    let associativity_verified = n <= FULL_ASSOCIATIVITY_CAP;
    if associativity_verified {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if !assoc(a, b, c) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(ASSOC_SAMPLE_SEED);
        for _ in 0..ASSOC_SAMPLES {
            let (a, b, c) = (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            );
            if !assoc(a, b, c) {
                return Err(Error::NotAssociative { a, b, c });
            }
        }
    }

    Ok(FiniteGroup {
        order: n,
        table: flat,
        identity,
        inverse,
        associativity_verified,
    })
}

/// True iff `set` is closed under the product and contains the identity.
/// Inverse closure follows in a finite group.
pub fn is_subgroup(g: &FiniteGroup, set: &GroupSubset) -> bool {
    debug_assert_eq!(set.members.len(), g.order());
    if !set.contains(g.identity()) {
        return false;
    }
    for a in set.members.ones() {
        for b in set.members.ones() {
            if !set.contains(g.mul(a, b)) {
                return false;
            }
        }
    }
    true
}

/// True iff `set` is a subgroup stable under conjugation by every element.
pub fn is_normal_subgroup(g: &FiniteGroup, set: &GroupSubset) -> bool {
    if !is_subgroup(g, set) {
        return false;
    }
    for h in set.members.ones() {
        for x in 0..g.order() {
            if !set.contains(g.mul(g.mul(x, h), g.inv(x))) {
                return false;
            }
        }
    }
    true
}

/// Conjugacy classes as bit sets, ordered by least member.
pub fn conjugacy_classes(g: &FiniteGroup) -> Vec<FixedBitSet> {
    let n = g.order();
    let mut assigned = FixedBitSet::with_capacity(n);
    let mut classes = Vec::new();
    for e in 0..n {
        if assigned.contains(e) {
            continue;
        }
        let mut class = FixedBitSet::with_capacity(n);
        for x in 0..n {
            class.insert(g.mul(g.mul(x, e), g.inv(x)));
        }
        assigned.union_with(&class);
        classes.push(class);
    }
    classes
}

/// Smallest product-closed superset of `seed` containing the identity.
fn closure(g: &FiniteGroup, seed: &FixedBitSet) -> FixedBitSet {
    let mut set = seed.clone();
    set.insert(g.identity());
    let mut work: VecDeque<usize> = set.ones().collect();
    while let Some(a) = work.pop_front() {
        for b in set.ones().collect::<Vec<_>>() {
            for p in [g.mul(a, b), g.mul(b, a)] {
                if !set.contains(p) {
                    set.insert(p);
                    work.push_back(p);
                }
            }
        }
    }
    set
}

/// All normal subgroups, sorted by size then member list.
///
/// Normal subgroups are exactly the product-closed unions of conjugacy
/// classes containing the identity, so the lattice is generated by closing
/// joins: start from the trivial subgroup and repeatedly close the union
/// with one more class. Closing a conjugation-stable set keeps it stable,
/// and any normal subgroup is reached by adding its classes one at a time
/// (intermediate closures stay inside it).
pub fn enumerate_normal_subgroups(g: &FiniteGroup) -> Result<Vec<GroupSubset>> {
    if g.order() > NORMAL_ENUM_ORDER_CAP {
        return Err(Error::BudgetExceeded {
            task: "normal subgroup enumeration",
            needed: g.order() as u128,
            cap: NORMAL_ENUM_ORDER_CAP as u128,
        });
    }
    let classes = conjugacy_classes(g);
    let trivial = {
        let mut s = FixedBitSet::with_capacity(g.order());
        s.insert(g.identity());
        s
    };
    let mut seen: std::collections::HashSet<FixedBitSet> =
        std::collections::HashSet::from([trivial.clone()]);
    let mut queue: VecDeque<FixedBitSet> = VecDeque::from([trivial]);
    while let Some(current) = queue.pop_front() {
        for class in &classes {
            if class.is_subset(&current) {
                continue;
            }
            let mut seed = current.clone();
            seed.union_with(class);
            let closed = closure(g, &seed);
            if !seen.contains(&closed) {
                if seen.len() >= NORMAL_ENUM_LATTICE_CAP {
                    return Err(Error::BudgetExceeded {
                        task: "normal subgroup lattice",
                        needed: (seen.len() + 1) as u128,
                        cap: NORMAL_ENUM_LATTICE_CAP as u128,
                    });
                }
                seen.insert(closed.clone());
                queue.push_back(closed);
            }
        }
    }
    let mut out: Vec<GroupSubset> = seen
        .into_iter()
        .map(|members| GroupSubset { members })
        .collect();
    out.sort_by(|a, b| {
        (a.count(), a.ids()).cmp(&(b.count(), b.ids()))
    });
    for h in &out {
        debug_assert!(is_normal_subgroup(g, h));
    }
    Ok(out)
}

/// The translation relation of A: edge (g, h) iff g^-1 h is in A. Row g
/// is the left translate gA.
pub fn cayley_relation(g: &FiniteGroup, a: &GroupSubset) -> BipartiteGraph {
    let n = g.order();
    debug_assert_eq!(a.members.len(), n);
    let rows = (0..n)
        .map(|x| {
            let mut row = FixedBitSet::with_capacity(n);
            for s in a.members.ones() {
                row.insert(g.mul(x, s));
            }
            row
        })
        .collect();
    BipartiteGraph::from_rows(n, n, rows)
}

/// The product relation of A: edge (x, y) iff y x is in A. Row x is the
/// right translate A x^-1.
pub fn phi_relation(g: &FiniteGroup, a: &GroupSubset) -> BipartiteGraph {
    let n = g.order();
    debug_assert_eq!(a.members.len(), n);
    let rows = (0..n)
        .map(|x| {
            let mut row = FixedBitSet::with_capacity(n);
            for s in a.members.ones() {
                row.insert(g.mul(s, g.inv(x)));
            }
            row
        })
        .collect();
    BipartiteGraph::from_rows(n, n, rows)
}

/// Transfers a half-graph witness from the translation relation to the
/// product relation: with input rows a_1..a_k and b_1..b_k, the image has
/// left tuple (b_k, ..., b_1) and right tuple (a_k^-1, ..., a_1^-1), since
/// a_{k+1-j}^-1 b_{k+1-i} lands in A exactly when i <= j. The input is
/// verified against the translation relation and the image against the
/// product relation.
pub fn halfgraph_bijection(
    g: &FiniteGroup,
    a: &GroupSubset,
    w: &HalfGraphWitness,
) -> Result<HalfGraphWitness> {
    let cay = cayley_relation(g, a);
    if !verify_witness(&cay, w)? {
        return Err(Error::InvalidWitness(
            "input does not verify on the translation relation".into(),
        ));
    }
    let k = w.k();
    let image = HalfGraphWitness::new(
        (0..k).map(|i| w.b[k - 1 - i]).collect(),
        (0..k).map(|j| g.inv(w.a[k - 1 - j])).collect(),
    );
    let phi = phi_relation(g, a);
    if !verify_witness(&phi, &image)? {
        return Err(Error::InvalidWitness(
            "image fails on the product relation; the input witness is inconsistent".into(),
        ));
    }
    Ok(image)
}

/// Inverse of [`halfgraph_bijection`]: maps a product-relation witness back
/// to a translation-relation witness.
pub fn halfgraph_bijection_inverse(
    g: &FiniteGroup,
    a: &GroupSubset,
    w: &HalfGraphWitness,
) -> Result<HalfGraphWitness> {
    let phi = phi_relation(g, a);
    if !verify_witness(&phi, w)? {
        return Err(Error::InvalidWitness(
            "input does not verify on the product relation".into(),
        ));
    }
    let k = w.k();
    let image = HalfGraphWitness::new(
        (0..k).map(|i| g.inv(w.b[k - 1 - i])).collect(),
        (0..k).map(|j| w.a[k - 1 - j]).collect(),
    );
    let cay = cayley_relation(g, a);
    if !verify_witness(&cay, &image)? {
        return Err(Error::InvalidWitness(
            "image fails on the translation relation; the input witness is inconsistent".into(),
        ));
    }
    Ok(image)
}

/// Left cosets of a subgroup, ordered by least representative.
pub fn left_cosets(g: &FiniteGroup, h: &GroupSubset) -> Vec<FixedBitSet> {
    let n = g.order();
    let mut covered = FixedBitSet::with_capacity(n);
    let mut cosets = Vec::new();
    for rep in 0..n {
        if covered.contains(rep) {
            continue;
        }
        let mut coset = FixedBitSet::with_capacity(n);
        for s in h.members.ones() {
            coset.insert(g.mul(rep, s));
        }
        covered.union_with(&coset);
        cosets.push(coset);
    }
    cosets
}

/// A subset approximated by a union of cosets of a normal subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetApprox {
    pub subgroup: GroupSubset,
    pub index: usize,
    pub coset_union: GroupSubset,
    pub symdiff: u64,
    /// The acceptance bound eps*|H| when the approximation came out of a
    /// bounded search; absent for a plain best-union computation.
    pub bound: Option<BigRational>,
}

/// The best coset-union approximation of A over a normal subgroup H: a
/// coset joins the union exactly when A covers a strict majority of it
/// (ties excluded), which minimizes the symmetric difference; the reported
/// symdiff is the sum of the per-coset minority counts.
pub fn best_coset_union(
    g: &FiniteGroup,
    a: &GroupSubset,
    h: &GroupSubset,
) -> Result<CosetApprox> {
    if !is_normal_subgroup(g, h) {
        return Err(Error::NotNormal(format!(
            "{:?} is not a normal subgroup",
            h.ids()
        )));
    }
    let n = g.order();
    let mut union = FixedBitSet::with_capacity(n);
    let mut symdiff = 0u64;
    for coset in left_cosets(g, h) {
        let inside = coset.intersection_count(&a.members);
        let size = coset.count_ones(..);
        if 2 * inside > size {
            union.union_with(&coset);
            symdiff += (size - inside) as u64;
        } else {
            symdiff += inside as u64;
        }
    }
    Ok(CosetApprox {
        subgroup: h.clone(),
        index: n / h.count(),
        coset_union: GroupSubset { members: union },
        symdiff,
        bound: None,
    })
}

/// Outcome of the bounded coset-approximation search.
#[derive(Debug, Clone)]
pub enum RegularitySearchOutcome {
    /// Best approximation met the strict bound symdiff < eps*|H|.
    Accepted(CosetApprox),
    /// No candidate met its bound; the minimum found is reported when any
    /// candidate existed.
    Rejected { best: Option<CosetApprox> },
}

/// Searches all normal subgroups of index at most `max_index` for the
/// best coset-union approximation of A. Candidates are ranked by symdiff,
/// then larger subgroup, then lexicographically least member list; the
/// winner is accepted only under the strict bound symdiff < eps*|H|.
pub fn arithmetic_regularity_search(
    g: &FiniteGroup,
    a: &GroupSubset,
    eps: &BigRational,
    max_index: usize,
) -> Result<RegularitySearchOutcome> {
    assert!(eps > &BigRational::from_integer(BigInt::from(0)), "eps must be positive");
    let mut best: Option<CosetApprox> = None;
    for h in enumerate_normal_subgroups(g)? {
        if h.count() == 0 || g.order() / h.count() > max_index {
            continue;
        }
        let mut approx = best_coset_union(g, a, &h)?;
        approx.bound = Some(eps * BigRational::from_integer(BigInt::from(h.count())));
        let better = match &best {
            None => true,
            Some(b) => {
                let key_new = (approx.symdiff, std::cmp::Reverse(approx.subgroup.count()));
                let key_old = (b.symdiff, std::cmp::Reverse(b.subgroup.count()));
                key_new < key_old
                    || (key_new == key_old
                        && approx.subgroup.ids() < b.subgroup.ids())
            }
        };
        if better {
            best = Some(approx);
        }
    }
    match best {
        Some(b) => {
            let bound = b.bound.clone().expect("bound set above");
            if BigRational::from_integer(BigInt::from(b.symdiff)) < bound {
                Ok(RegularitySearchOutcome::Accepted(b))
            } else {
                Ok(RegularitySearchOutcome::Rejected { best: Some(b) })
            }
        }
        None => Ok(RegularitySearchOutcome::Rejected { best: None }),
    }
}
