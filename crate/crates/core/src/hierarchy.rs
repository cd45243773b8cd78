//! Hierarchical trees: each focal element hangs below a strict superset of
//! minimal cardinality, so a node inherits every ancestor of its father.
//!
//! Counting conventions:
//! * construction: one visit per candidate father compared; root designations
//!   are tallied in [`OpCounter::root_designations`] only;
//! * `q_tree`: every overlay entry scanned is one visit, and a leaf also
//!   visits itself. On a complete power set this is "an internal node visits
//!   its whole class, a leaf visits itself".

use std::collections::BTreeMap;

use crate::body::{complement_body_counted, Body};
use crate::error::{EvidenceError, Result};
use crate::frame::Space;
use crate::metrics::{binomial, OpCounter, Phase};
use crate::partition::CardinalityPartition;
use crate::set::SetLike;

#[derive(Clone, Debug)]
pub struct HierarchicalTree<F: Space> {
    frame: F,
    nodes: Vec<F::Set>,
    masses: Vec<f64>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: Option<usize>,
    dummy: Option<usize>,
    index: BTreeMap<F::Set, usize>,
}

impl<F: Space> HierarchicalTree<F> {
    /// Assembles a tree from node sets, masses and fathers. Children are
    /// ordered canonically. Exactly one node must lack a father unless the
    /// tree is empty.
    pub(crate) fn from_parts(
        frame: F,
        nodes: Vec<F::Set>,
        masses: Vec<f64>,
        parent: Vec<Option<usize>>,
        dummy: Option<usize>,
    ) -> Self {
        let mut children = vec![Vec::new(); nodes.len()];
        let mut root = None;
        for (i, p) in parent.iter().enumerate() {
            match p {
                Some(p) => children[*p].push(i),
                None => {
                    debug_assert!(root.is_none(), "several roots");
                    root = Some(i);
                }
            }
        }
        for c in &mut children {
            c.sort_by(|&a, &b| nodes[a].cmp(&nodes[b]));
        }
        let index = nodes.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        HierarchicalTree {
            frame,
            nodes,
            masses,
            parent,
            children,
            root,
            dummy,
            index,
        }
    }

    pub fn frame(&self) -> &F {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    /// The zero-mass union node added when the focal family has several
    /// maximal elements.
    pub fn dummy_root(&self) -> Option<usize> {
        self.dummy
    }

    pub fn is_dummy(&self, node: usize) -> bool {
        self.dummy == Some(node)
    }

    pub fn set(&self, node: usize) -> &F::Set {
        &self.nodes[node]
    }

    pub fn mass(&self, node: usize) -> f64 {
        self.masses[node]
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn node_of(&self, set: &F::Set) -> Option<usize> {
        self.index.get(set).copied()
    }

    /// Father set of `set`, if `set` is a non-root node.
    pub fn father_of(&self, set: &F::Set) -> Option<&F::Set> {
        self.node_of(set)
            .and_then(|i| self.parent[i])
            .map(|p| &self.nodes[p])
    }

    /// Non-dummy nodes with their masses, as a body over the tree's frame.
    pub fn to_body(&self) -> Body<F> {
        let masses = (0..self.len())
            .filter(|&i| !self.is_dummy(i))
            .map(|i| (self.nodes[i].clone(), self.masses[i]))
            .collect();
        Body::from_masses(self.frame.clone(), masses)
    }

    /// Nodes in depth-first pre-order from the root.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack: Vec<usize> = self.root.into_iter().collect();
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.children[n].iter().rev());
        }
        out
    }

    /// Multiset of `(|f|, |Father(f)|)` over non-root nodes, sorted. Identical
    /// for every valid tree of one focal family.
    pub fn father_cardinalities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = (0..self.len())
            .filter_map(|i| {
                self.parent[i].map(|p| (self.nodes[i].cardinality(), self.nodes[p].cardinality()))
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// Builds the hierarchical tree of a partition.
///
/// A node of cardinality `i` scans `c_{i+1}`, `c_{i+2}`, … and takes the first
/// superset found as its father. Several roots get a dummy union root.
pub fn build_tree<F: Space>(p: &CardinalityPartition<F>, counter: &mut OpCounter) -> HierarchicalTree<F> {
    build_tree_with(p, false, counter)
}

fn build_tree_with<F: Space>(
    p: &CardinalityPartition<F>,
    last_in_class: bool,
    counter: &mut OpCounter,
) -> HierarchicalTree<F> {
    let frame = p.body().frame().clone();
    let mut nodes: Vec<F::Set> = p.members().cloned().collect();
    let mut masses: Vec<f64> = nodes.iter().map(|s| p.mass(s)).collect();
    let index: BTreeMap<&F::Set, usize> = nodes.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let n = p.class_count();

    let mut parent: Vec<Option<usize>> = vec![None; nodes.len()];
    for (i, f) in nodes.iter().enumerate() {
        'classes: for card in f.cardinality() + 1..=n {
            let class = p.class(card);
            let scan: Box<dyn Iterator<Item = &F::Set>> = if last_in_class {
                Box::new(class.iter().rev())
            } else {
                Box::new(class.iter())
            };
            for g in scan {
                counter.visit(Phase::Construction);
                if f.is_subset(g) {
                    parent[i] = Some(index[g]);
                    break 'classes;
                }
            }
        }
        if parent[i].is_none() {
            counter.designate_root();
        }
    }
    drop(index);

    let roots: Vec<usize> = (0..nodes.len()).filter(|&i| parent[i].is_none()).collect();
    let mut dummy = None;
    if roots.len() > 1 {
        let union = roots
            .iter()
            .fold(frame.empty_set(), |acc, &r| acc.union(&nodes[r]));
        let u = nodes.len();
        nodes.push(union);
        masses.push(0.0);
        parent.push(None);
        for r in roots {
            parent[r] = Some(u);
        }
        dummy = Some(u);
    }
    HierarchicalTree::from_parts(frame, nodes, masses, parent, dummy)
}

/// Closed-form construction cost of the complete tree on `n` elements:
/// `2^n + 2^{n-3} − 2 + Σ_{i=3}^{n-1} C(2i, i−2)·2^{n−i−1}`. For `n < 3` the
/// fractional `2^{n-3}` term is floored, which matches measured counts.
pub fn worst_case_construction_cost(n: u32) -> u128 {
    assert!(n >= 1);
    let pow = |k: u32| 1u128 << k;
    let sum: u128 = (3..n)
        .map(|i| binomial(2 * i as u64, i as u64 - 2) * pow(n - i - 1))
        .sum();
    pow(n) + (pow(n) >> 3) - 2 + sum
}

/// Closed-form cost of `q_tree` on the complete tree: `2^{n−1} − n + C(2n, n)/2`.
pub fn worst_case_q_cost(n: u32) -> u128 {
    assert!(n >= 1);
    (1u128 << (n - 1)) - n as u128 + binomial(2 * n as u64, n as u64) / 2
}

/// Approximation `2^{n−1} − n + 2^{2n−1}/√(nπ)` of [`worst_case_q_cost`].
pub fn worst_case_q_cost_bound(n: u32) -> f64 {
    let n_f = n as f64;
    2f64.powi(n as i32 - 1) - n_f + 2f64.powi(2 * n as i32 - 1) / (n_f * std::f64::consts::PI).sqrt()
}

/// Commonality of every node of the tree (the dummy root excluded).
///
/// Walks the tree depth-first. At node `f` with father `p`, every overlay
/// entry `l` whose cardinality lies in `[|f|, |p|)` (leaves: `(|f|, |p|)`) and
/// that meets `f` without being inside it has its mass moved onto `f ∩ l`.
/// Then `Q(f) = Q(p) + m(f)`. Moves are undone when the walk leaves the
/// subtree of `f`, so siblings see the overlay their father left.
pub fn q_tree<F: Space>(
    tree: &HierarchicalTree<F>,
    p: &CardinalityPartition<F>,
    counter: &mut OpCounter,
) -> Result<BTreeMap<F::Set, f64>> {
    let real_nodes = tree.len() - usize::from(tree.dummy.is_some());
    if real_nodes != p.members().count()
        || p.members().any(|s| tree.node_of(s).is_none_or(|i| tree.is_dummy(i)))
    {
        return Err(EvidenceError::TreePartitionMismatch);
    }
    let Some(root) = tree.root else {
        return Ok(BTreeMap::new());
    };

    let n = p.class_count();
    let mut overlay: Vec<BTreeMap<F::Set, f64>> = vec![BTreeMap::new(); n];
    for (s, &m) in p.overlay() {
        if !s.is_empty() {
            overlay[s.cardinality() - 1].insert(s.clone(), m);
        }
    }
    if let Some(d) = tree.dummy {
        let u = &tree.nodes[d];
        overlay[u.cardinality() - 1].insert(u.clone(), 0.0);
    }

    enum Step {
        Enter(usize),
        Exit(usize),
    }
    let mut q = vec![0.0; tree.len()];
    let mut undo: Vec<(F::Set, Option<f64>)> = Vec::new();
    let mut stack = vec![Step::Enter(root)];
    while let Some(step) = stack.pop() {
        let node = match step {
            Step::Exit(mark) => {
                while undo.len() > mark {
                    let (s, old) = undo.pop().expect("undo entry");
                    let class = &mut overlay[s.cardinality() - 1];
                    match old {
                        Some(m) => class.insert(s, m),
                        None => class.remove(&s),
                    };
                }
                continue;
            }
            Step::Enter(node) => node,
        };
        let f = &tree.nodes[node];
        let lo = f.cardinality();
        let (hi, father_q) = match tree.parent[node] {
            Some(par) => (tree.nodes[par].cardinality(), q[par]),
            None => (n + 1, 0.0),
        };
        let has_sons = !tree.children[node].is_empty();
        let first = if has_sons {
            lo
        } else {
            counter.visit(Phase::Query);
            lo + 1
        };

        let mark = undo.len();
        for card in first..hi {
            let scanned: Vec<(F::Set, f64)> = overlay[card - 1]
                .iter()
                .map(|(s, &m)| (s.clone(), m))
                .collect();
            counter.visits(Phase::Query, scanned.len() as u64);
            for (l, m) in scanned {
                let meet = f.intersection(&l);
                if meet.is_empty() || meet == l || m == 0.0 {
                    continue;
                }
                counter.transfer();
                undo.push((l.clone(), Some(m)));
                overlay[card - 1].insert(l, 0.0);
                let target = &mut overlay[meet.cardinality() - 1];
                let old = target.get(&meet).copied();
                undo.push((meet.clone(), old));
                target.insert(meet, old.unwrap_or(0.0) + m);
            }
        }
        q[node] = father_q + overlay[lo - 1].get(f).copied().unwrap_or(0.0);

        stack.push(Step::Exit(mark));
        stack.extend(tree.children[node].iter().rev().map(|&c| Step::Enter(c)));
    }

    Ok((0..tree.len())
        .filter(|&i| !tree.is_dummy(i))
        .map(|i| (tree.nodes[i].clone(), q[i]))
        .collect())
}

/// Q(A) through a hierarchical tree, inserting A as a zero-mass probe when it
/// is not focal.
pub fn q_via_tree<F: Space>(body: &Body<F>, a: &F::Set, counter: &mut OpCounter) -> Result<f64> {
    body.check_set(a)?;
    if a.is_empty() {
        counter.visits(Phase::Query, body.len() as u64);
        return Ok(body.total_mass());
    }
    let p = CardinalityPartition::with_probes(body, std::slice::from_ref(a), counter);
    let tree = build_tree(&p, counter);
    let qs = q_tree(&tree, &p, counter)?;
    Ok(qs[a])
}

/// Bel(A) = Q̄(Ā) − m(∅), with Q̄ the commonality of the complement body
/// computed on its hierarchical tree.
pub fn bel_via_complement<F: Space>(
    body: &Body<F>,
    a: &F::Set,
    counter: &mut OpCounter,
) -> Result<f64> {
    body.check_set(a)?;
    let complement = complement_body_counted(body, counter);
    let a_bar = body.frame().complement(a);
    Ok(q_via_tree(&complement, &a_bar, counter)? - body.empty_mass())
}

/// Pl(A) = 1 − Bel(Ā) with Bel from [`bel_via_complement`].
pub fn pl_via_complement<F: Space>(
    body: &Body<F>,
    a: &F::Set,
    counter: &mut OpCounter,
) -> Result<f64> {
    body.require_normalized()?;
    body.check_set(a)?;
    let a_bar = body.frame().complement(a);
    Ok(1.0 - bel_via_complement(body, &a_bar, counter)?)
}

/// Structural problems found by [`validate_tree`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeViolation {
    RootCount(usize),
    DuplicateNode(usize),
    NotStrictSuperset { node: usize },
    FatherNotMinimal { node: usize, father_card: usize, minimal_card: usize },
    MissingFather { node: usize },
    Unreachable { node: usize },
    BadDummy,
}

/// Checks every tree invariant against a brute-force scan of the nodes:
/// single root, strict inclusion along edges, fathers of minimal cardinality
/// among all focal strict supersets, and a zero-mass union dummy root with at
/// least two sons when present.
pub fn validate_tree<F: Space>(tree: &HierarchicalTree<F>) -> Result<(), TreeViolation> {
    let len = tree.len();
    let roots = (0..len).filter(|&i| tree.parent[i].is_none()).count();
    if len > 0 && roots != 1 {
        return Err(TreeViolation::RootCount(roots));
    }
    if tree.index.len() != len {
        let dup = (0..len).find(|&i| tree.index[&tree.nodes[i]] != i).unwrap_or(0);
        return Err(TreeViolation::DuplicateNode(dup));
    }
    let real: Vec<usize> = (0..len).filter(|&i| !tree.is_dummy(i)).collect();
    for i in 0..len {
        let f = &tree.nodes[i];
        let minimal = real
            .iter()
            .map(|&j| &tree.nodes[j])
            .filter(|g| f.is_strict_subset(g))
            .map(SetLike::cardinality)
            .min();
        match (tree.parent[i], minimal) {
            (None, None) => {}
            (None, Some(_)) => return Err(TreeViolation::MissingFather { node: i }),
            (Some(p), _) if !f.is_strict_subset(&tree.nodes[p]) => {
                return Err(TreeViolation::NotStrictSuperset { node: i })
            }
            (Some(p), None) if !tree.is_dummy(p) => {
                return Err(TreeViolation::FatherNotMinimal {
                    node: i,
                    father_card: tree.nodes[p].cardinality(),
                    minimal_card: 0,
                })
            }
            (Some(_), None) => {}
            (Some(p), Some(min)) => {
                let card = tree.nodes[p].cardinality();
                if tree.is_dummy(p) || card != min {
                    return Err(TreeViolation::FatherNotMinimal {
                        node: i,
                        father_card: card,
                        minimal_card: min,
                    });
                }
            }
        }
        let mut cur = i;
        for _ in 0..=len {
            match tree.parent[cur] {
                Some(p) => cur = p,
                None => break,
            }
        }
        if Some(cur) != tree.root {
            return Err(TreeViolation::Unreachable { node: i });
        }
    }
    if let Some(d) = tree.dummy {
        let union = real
            .iter()
            .fold(tree.frame.empty_set(), |acc, &j| acc.union(&tree.nodes[j]));
        if tree.masses[d] != 0.0
            || tree.root != Some(d)
            || tree.children[d].len() < 2
            || tree.nodes[d] != union
        {
            return Err(TreeViolation::BadDummy);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{bel_brute, make_body, pl_brute, q_brute, BodyOfEvidence, MASS_TOLERANCE};
    use crate::frame::Frame;
    use crate::partition::build_partition;
    use crate::set::FocalSet;
    use proptest::prelude::*;

    fn frame(n: usize) -> Frame {
        Frame::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string())).unwrap()
    }

    fn complete(n: usize) -> BodyOfEvidence {
        let k = (1u64 << n) - 1;
        Body::new(frame(n), (1..=k).map(|m| (FocalSet::from_mask(m), 1.0 / k as f64))).unwrap()
    }

    fn e1() -> BodyOfEvidence {
        BodyOfEvidence::from_labels(&frame(3), &[(&["a", "b"], 0.6), (&["b", "c"], 0.4)]).unwrap()
    }

    fn ten_sets() -> BodyOfEvidence {
        let f = frame(4);
        let sets = ["abcd", "abc", "abd", "ab", "ac", "bc", "a", "b", "c", "d"];
        let entries = sets
            .iter()
            .map(|s| (f.set(s.split("").filter(|x| !x.is_empty())).unwrap(), 0.1));
        Body::new(f.clone(), entries).unwrap()
    }

    fn tree_of(body: &BodyOfEvidence, c: &mut OpCounter) -> (CardinalityPartition<Frame>, HierarchicalTree<Frame>) {
        let p = build_partition(body, &mut OpCounter::new());
        let t = build_tree(&p, c);
        (p, t)
    }

    fn name(f: &Frame, s: &FocalSet) -> String {
        f.atom_labels(s).concat()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(worst_case_construction_cost(3), 7);
        assert_eq!(worst_case_construction_cost(4), 22);
        assert_eq!(worst_case_construction_cost(5), 74);
        assert_eq!(worst_case_q_cost(3), 11);
        assert_eq!(worst_case_q_cost(5), 137);
        let bound = worst_case_q_cost_bound(5);
        assert!(bound >= 137.0 && bound.ceil() == 141.0, "{bound}");
    }

    #[test]
    fn complete_power_set_counts() {
        for n in 1..=7u32 {
            let c = &mut OpCounter::new();
            let (p, t) = tree_of(&complete(n as usize), c);
            assert_eq!(c.phase(Phase::Construction) as u128, worst_case_construction_cost(n), "n={n}");
            assert_eq!(c.root_designations(), 1);
            let q = &mut OpCounter::new();
            q_tree(&t, &p, q).unwrap();
            assert_eq!(q.phase(Phase::Query) as u128, worst_case_q_cost(n), "n={n}");
        }
    }

    #[test]
    fn ten_set_fathers() {
        let c = &mut OpCounter::new();
        let body = ten_sets();
        let f = body.frame().clone();
        let (_, t) = tree_of(&body, c);
        let expected = [
            ("abc", "abcd"),
            ("abd", "abcd"),
            ("ab", "abc"),
            ("ac", "abc"),
            ("bc", "abc"),
            ("a", "ab"),
            ("b", "ab"),
            ("c", "ac"),
            ("d", "abd"),
        ];
        for (child, father) in expected {
            let s = f.set(child.split("").filter(|x| !x.is_empty())).unwrap();
            assert_eq!(name(&f, t.father_of(&s).unwrap()), father, "{child}");
        }
        assert!(t.dummy_root().is_none());
        assert_eq!(c.phase(Phase::Construction), 14);
        validate_tree(&t).unwrap();
    }

    #[test]
    fn e1_gets_dummy_root() {
        let body = e1();
        let f = body.frame().clone();
        let c = &mut OpCounter::new();
        let (p, t) = tree_of(&body, c);
        let d = t.dummy_root().unwrap();
        assert_eq!(t.set(d), &f.full_set());
        assert_eq!(t.mass(d), 0.0);
        assert_eq!(c.root_designations(), 2);
        validate_tree(&t).unwrap();
        let q = q_tree(&t, &p, c).unwrap();
        assert!((q[&f.set(["a", "b"]).unwrap()] - 0.6).abs() < 1e-12);
        assert!((q[&f.set(["b", "c"]).unwrap()] - 0.4).abs() < 1e-12);
        assert_eq!(q.len(), 2);
    }

    #[test]
    fn vacuous_single_node() {
        let body = Body::vacuous(frame(3));
        let c = &mut OpCounter::new();
        let (p, t) = tree_of(&body, c);
        assert_eq!(t.len(), 1);
        assert_eq!(q_tree(&t, &p, c).unwrap()[&frame(3).full_set()], 1.0);
    }

    #[test]
    fn mismatch_detected() {
        let c = &mut OpCounter::new();
        let (_, t) = tree_of(&e1(), c);
        let other = build_partition(&ten_sets(), c);
        assert_eq!(q_tree(&t, &other, c), Err(EvidenceError::TreePartitionMismatch));
    }

    #[test]
    fn complement_measures() {
        let f = frame(3);
        let c = &mut OpCounter::new();
        let ab = f.set(["a", "b"]).unwrap();
        assert!((bel_via_complement(&e1(), &ab, c).unwrap() - 0.6).abs() < 1e-12);
        assert!((bel_via_complement(&e1(), &f.full_set(), c).unwrap() - 1.0).abs() < 1e-12);
        assert!((pl_via_complement(&e1(), &f.set(["a"]).unwrap(), c).unwrap() - 0.6).abs() < 1e-12);
        assert!((pl_via_complement(&e1(), &f.set(["b"]).unwrap(), c).unwrap() - 1.0).abs() < 1e-12);
        assert!(pl_via_complement(&e1(), &FocalSet::EMPTY, c).unwrap().abs() < 1e-12);

        let fab = frame(2);
        let unnorm = make_body(fab.clone(), vec![(FocalSet::EMPTY, 0.3), (fab.set(["a"]).unwrap(), 0.7)], false)
            .unwrap();
        assert!((bel_via_complement(&unnorm, &fab.set(["a"]).unwrap(), c).unwrap() - 0.7).abs() < 1e-12);
        assert!(matches!(
            pl_via_complement(&unnorm, &fab.set(["a"]).unwrap(), c),
            Err(EvidenceError::UnnormalizedBody { .. })
        ));
    }

    fn arb_body(max_n: usize) -> impl Strategy<Value = BodyOfEvidence> {
        (3usize..=max_n).prop_flat_map(|n| {
            (proptest::collection::btree_map(1..1u64 << n, 1u32..1000, 1..40), 0u32..4).prop_map(
                move |(raw, empty)| {
                    let mut entries: Vec<_> = raw
                        .into_iter()
                        .map(|(m, w)| (FocalSet::from_mask(m), w as f64))
                        .collect();
                    if empty == 3 {
                        entries.push((FocalSet::EMPTY, 300.0));
                    }
                    let total: f64 = entries.iter().map(|e| e.1).sum();
                    Body::new(frame(n), entries.into_iter().map(|(s, w)| (s, w / total))).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn q_tree_matches_brute(body in arb_body(8)) {
            let c = &mut OpCounter::new();
            let (p, t) = tree_of(&body, c);
            prop_assert_eq!(validate_tree(&t), Ok(()));
            let q = q_tree(&t, &p, c).unwrap();
            for (s, v) in &q {
                prop_assert!((v - q_brute(&body, s, c).unwrap()).abs() <= MASS_TOLERANCE);
            }
        }

        #[test]
        fn tie_break_does_not_change_father_cardinalities(body in arb_body(7)) {
            let c = &mut OpCounter::new();
            let p = build_partition(&body, c);
            let first = build_tree_with(&p, false, c);
            let last = build_tree_with(&p, true, c);
            prop_assert_eq!(validate_tree(&last), Ok(()));
            prop_assert_eq!(first.father_cardinalities(), last.father_cardinalities());
        }

        #[test]
        fn complement_route_matches_brute(body in arb_body(6), raw in any::<u64>()) {
            let c = &mut OpCounter::new();
            let a = FocalSet::from_mask(raw).intersection(&body.frame().full_set());
            let bel = bel_via_complement(&body, &a, c).unwrap();
            prop_assert!((bel - bel_brute(&body, &a, c).unwrap()).abs() <= MASS_TOLERANCE);
            if body.is_normalized() {
                let pl = pl_via_complement(&body, &a, c).unwrap();
                prop_assert!((pl - pl_brute(&body, &a, c).unwrap()).abs() <= MASS_TOLERANCE);
            }
            let q = q_via_tree(&body, &a, c).unwrap();
            prop_assert!((q - q_brute(&body, &a, c).unwrap()).abs() <= MASS_TOLERANCE);
        }
    }
}
