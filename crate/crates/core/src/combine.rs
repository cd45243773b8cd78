//! Dempster's rule of combination (unnormalized conjunctive form) by three
//! strategies, and a static selector between them.

use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use crate::body::Body;
use crate::error::{EvidenceError, Result};
use crate::frame::Space;
use crate::hierarchy::{build_tree, worst_case_construction_cost};
use crate::metrics::{OpCounter, Phase};
use crate::partition::build_partition;
use crate::set::SetLike;
use crate::transform::{check_enumerable, moebius_counted, zeta_counted, MAX_POWER_SET_FRAME};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Every pair of focal elements.
    Brute,
    /// Pointwise product of commonality vectors over the whole power set.
    Q,
    /// Pre-processing, then a hierarchical tree of the smaller body.
    Tree,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Brute, Strategy::Q, Strategy::Tree];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Brute => "brute",
            Strategy::Q => "q",
            Strategy::Tree => "tree",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "brute" => Ok(Strategy::Brute),
            "q" => Ok(Strategy::Q),
            "tree" => Ok(Strategy::Tree),
            other => Err(format!("unknown combination strategy {other}")),
        }
    }
}

/// Output of a combination. `body` may carry mass on the empty set; that mass
/// is also reported as `conflict`.
#[derive(Clone, Debug)]
pub struct CombinationResult<F: Space> {
    pub body: Body<F>,
    pub conflict: f64,
    pub counter: OpCounter,
    pub strategy: Strategy,
}

impl<F: Space> CombinationResult<F> {
    fn new(frame: F, masses: BTreeMap<F::Set, f64>, counter: OpCounter, strategy: Strategy) -> Self {
        let body = Body::from_masses(frame, masses);
        CombinationResult {
            conflict: body.empty_mass(),
            body,
            counter,
            strategy,
        }
    }
}

fn same_frame<F: Space>(b1: &Body<F>, b2: &Body<F>) -> Result<()> {
    if b1.frame() == b2.frame() {
        Ok(())
    } else {
        Err(EvidenceError::FrameMismatch)
    }
}

pub fn combine<F: Space>(b1: &Body<F>, b2: &Body<F>, strategy: Strategy) -> Result<CombinationResult<F>> {
    match strategy {
        Strategy::Brute => combine_brute(b1, b2),
        Strategy::Q => combine_q_strategy(b1, b2),
        Strategy::Tree => combine_tree(b1, b2),
    }
}

/// m3(A) = Σ m1(B)·m2(C) over B ∩ C = A. Visits exactly |F1|·|F2| pairs.
pub fn combine_brute<F: Space>(b1: &Body<F>, b2: &Body<F>) -> Result<CombinationResult<F>> {
    same_frame(b1, b2)?;
    let mut counter = OpCounter::new();
    let mut m3: BTreeMap<F::Set, f64> = BTreeMap::new();
    for (b, m1) in b1.iter() {
        for (c, m2) in b2.iter() {
            counter.visit(Phase::Combination);
            *m3.entry(b.intersection(c)).or_insert(0.0) += m1 * m2;
        }
    }
    Ok(CombinationResult::new(b1.frame().clone(), m3, counter, Strategy::Brute))
}

/// Q3 = Q1·Q2 pointwise, then Möbius inversion. Needs an enumerable frame.
pub fn combine_q_strategy<F: Space>(b1: &Body<F>, b2: &Body<F>) -> Result<CombinationResult<F>> {
    same_frame(b1, b2)?;
    check_enumerable(b1.frame())?;
    let mut counter = OpCounter::new();
    let q1 = zeta_counted(b1, &mut counter)?;
    let q2 = zeta_counted(b2, &mut counter)?;
    let q3 = q1.product(&q2, &mut counter)?;
    let body = moebius_counted(&q3, &mut counter)?;
    Ok(CombinationResult {
        conflict: body.empty_mass(),
        body,
        counter,
        strategy: Strategy::Q,
    })
}

/// Moves the mass of every focal `f` with `f ∩ u3 ≠ f` onto `f ∩ u3`,
/// merging with an existing entry when there is one. Costs one visit when the
/// body's focal union already equals `u3`, otherwise one per focal element.
pub fn preprocess<F: Space>(smaller: &Body<F>, u3: &F::Set, counter: &mut OpCounter) -> Body<F> {
    if &smaller.focal_union() == u3 {
        counter.visit(Phase::Preprocess);
        return smaller.clone();
    }
    let mut masses: BTreeMap<F::Set, f64> = BTreeMap::new();
    for (f, m) in smaller.iter() {
        counter.visit(Phase::Preprocess);
        let target = f.intersection(u3);
        if &target != f {
            counter.transfer();
        }
        *masses.entry(target).or_insert(0.0) += m;
    }
    Body::from_masses(smaller.frame().clone(), masses)
}

/// Hierarchical-tree combination.
///
/// The body with fewer focal elements (ties: `b1`) is pre-processed against
/// `u3 = u1 ∩ u2` and arranged in a hierarchical tree. Walking from the root,
/// each node `f` compares itself with `F2(Father(f))`, the intersections of
/// its father with the other body, and passes the non-empty `f ∩ g` on to its
/// sons as `F2(f)`. Pairs with an empty intersection feed the conflict.
pub fn combine_tree<F: Space>(b1: &Body<F>, b2: &Body<F>) -> Result<CombinationResult<F>> {
    same_frame(b1, b2)?;
    let (small, large) = if b2.len() < b1.len() { (b2, b1) } else { (b1, b2) };
    let mut counter = OpCounter::new();
    let u3 = small.focal_union().intersection(&large.focal_union());
    let pre = preprocess(small, &u3, &mut counter);
    // the partition is assembled while reading the body and is not charged
    let partition = build_partition(&pre, &mut OpCounter::new());
    let tree = build_tree(&partition, &mut counter);

    let total2 = large.total_mass();
    let mut m3: BTreeMap<F::Set, f64> = BTreeMap::new();
    let mut conflict = pre.empty_mass() * total2;

    struct Incoming<S> {
        entries: Vec<(S, f64)>,
        // b2 mass already disjoint from the father
        lost: f64,
    }
    if let Some(root) = tree.root() {
        let start = Rc::new(Incoming {
            entries: large.iter().map(|(s, m)| (s.clone(), m)).collect(),
            lost: 0.0,
        });
        let mut stack = vec![(root, start)];
        while let Some((node, incoming)) = stack.pop() {
            let f = tree.set(node);
            let m1 = tree.mass(node);
            let mut passed: BTreeMap<F::Set, f64> = BTreeMap::new();
            let mut disjoint = 0.0;
            for (g, m2) in &incoming.entries {
                counter.visit(Phase::Combination);
                let meet = f.intersection(g);
                if meet.is_empty() {
                    disjoint += m2;
                    continue;
                }
                if m1 > 0.0 {
                    *m3.entry(meet.clone()).or_insert(0.0) += m1 * m2;
                }
                *passed.entry(meet).or_insert(0.0) += m2;
            }
            conflict += m1 * (incoming.lost + disjoint);
            if !tree.children(node).is_empty() {
                let next = Rc::new(Incoming {
                    entries: passed.into_iter().collect(),
                    lost: incoming.lost + disjoint,
                });
                stack.extend(tree.children(node).iter().rev().map(|&c| (c, Rc::clone(&next))));
            }
        }
    }
    if conflict > 0.0 {
        *m3.entry(b1.frame().empty_set()).or_insert(0.0) += conflict;
    }
    Ok(CombinationResult::new(b1.frame().clone(), m3, counter, Strategy::Tree))
}

/// Closed-form combination-phase cost on complete bodies:
/// `2^m + 2·3^n − 3·2^n − 1` with `n = |u1|`, `m = |u2|`.
pub fn worst_case_combination_cost(n: u32, m: u32) -> u128 {
    ((1u128 << m) + 2 * 3u128.pow(n)).saturating_sub(3 * (1u128 << n) + 1)
}

/// Operation count of the Q strategy: direct use of the product and
/// inversion formulas, or the fast transform route.
pub fn predicted_q_strategy_cost(n: u32, fast: bool) -> u128 {
    if fast {
        (n as u128 + 1) * (1u128 << n) + n as u128 * (1u128 << n.saturating_sub(1)) - n as u128
    } else {
        3u128.pow(n) + (1u128 << (2 * n + 1)) - (1u128 << (n + 1))
    }
}

/// Static cost estimates behind [`choose_strategy`]; `None` when a strategy
/// does not apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrategyCosts {
    pub brute: u128,
    pub q: Option<u128>,
    pub tree: u128,
}

pub fn strategy_costs<F: Space>(b1: &Body<F>, b2: &Body<F>) -> StrategyCosts {
    let brute = b1.len() as u128 * b2.len() as u128;
    let n = b1.frame().size();
    let q = (n <= MAX_POWER_SET_FRAME).then(|| predicted_q_strategy_cost(n as u32, true));

    let (small, large) = if b2.len() < b1.len() { (b2, b1) } else { (b1, b2) };
    let u3 = small.focal_union().intersection(&large.focal_union());
    let mut pre_counter = OpCounter::new();
    let pre = preprocess(small, &u3, &mut pre_counter);
    let k = pre.len() as u128;
    let u1 = pre.focal_union().cardinality() as u32;
    let construction = if u1 == 0 {
        0
    } else if u1 <= 64 {
        worst_case_construction_cost(u1).min(k * k)
    } else {
        k * k
    };
    let tree = build_tree(&build_partition(&pre, &mut OpCounter::new()), &mut OpCounter::new());
    let f2 = large.len() as u128;
    let combination: u128 = (0..tree.len())
        .map(|i| match tree.parent(i) {
            None => f2,
            Some(p) => {
                let card = tree.set(p).cardinality() as u32;
                let subsets = if card >= 127 { u128::MAX } else { (1u128 << card) - 1 };
                f2.min(subsets)
            }
        })
        .sum();
    StrategyCosts {
        brute,
        q,
        tree: pre_counter.phase(Phase::Preprocess) as u128 + construction + combination,
    }
}

/// Picks the strategy with the smallest static cost estimate; ties prefer
/// brute force, then the tree strategy. No combination is performed.
pub fn choose_strategy<F: Space>(b1: &Body<F>, b2: &Body<F>) -> Strategy {
    let costs = strategy_costs(b1, b2);
    let mut best = (costs.brute, Strategy::Brute);
    if costs.tree < best.0 {
        best = (costs.tree, Strategy::Tree);
    }
    if let Some(q) = costs.q {
        if q < best.0 {
            best = (q, Strategy::Q);
        }
    }
    best.1
}
