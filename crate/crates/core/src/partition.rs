//! The cardinality partition of a focal family and the measures computed by
//! scanning only the relevant classes.

use std::collections::BTreeMap;

use crate::body::Body;
use crate::error::Result;
use crate::frame::Space;
use crate::metrics::{OpCounter, Phase};
use crate::set::SetLike;

/// Focal sets grouped by cardinality: class `i` holds the sets of size `i`,
/// each class in ascending canonical order. The empty set is never part of a
/// class.
#[derive(Clone, Debug)]
pub struct CardinalityPartition<F: Space> {
    body: Body<F>,
    classes: Vec<Vec<F::Set>>,
    masses: BTreeMap<F::Set, f64>,
    probes: usize,
}

/// Groups the focal elements of `body` by cardinality, one visit each.
pub fn build_partition<F: Space>(body: &Body<F>, counter: &mut OpCounter) -> CardinalityPartition<F> {
    CardinalityPartition::with_probes(body, &[], counter)
}

impl<F: Space> CardinalityPartition<F> {
    /// Like [`build_partition`], additionally inserting each non-empty,
    /// non-focal `probe` as a zero-mass member so tree algorithms report a
    /// value for it.
    pub fn with_probes(body: &Body<F>, probes: &[F::Set], counter: &mut OpCounter) -> Self {
        let n = body.frame().size();
        let mut classes: Vec<Vec<F::Set>> = vec![Vec::new(); n];
        let mut masses = BTreeMap::new();
        for (set, m) in body.iter() {
            counter.visit(Phase::Partition);
            masses.insert(set.clone(), m);
            if !set.is_empty() {
                classes[set.cardinality() - 1].push(set.clone());
            }
        }
        let mut added = 0;
        for p in probes {
            if !p.is_empty() && !masses.contains_key(p) {
                masses.insert(p.clone(), 0.0);
                classes[p.cardinality() - 1].push(p.clone());
                added += 1;
            }
        }
        if added > 0 {
            classes.iter_mut().for_each(|c| c.sort());
        }
        CardinalityPartition {
            body: body.clone(),
            classes,
            masses,
            probes: added,
        }
    }

    pub fn body(&self) -> &Body<F> {
        &self.body
    }

    /// |Ω|, the number of classes.
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Class `c_i` (1-based).
    pub fn class(&self, cardinality: usize) -> &[F::Set] {
        &self.classes[cardinality - 1]
    }

    pub fn classes(&self) -> impl Iterator<Item = (usize, &[F::Set])> {
        self.classes.iter().enumerate().map(|(i, c)| (i + 1, c.as_slice()))
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// All class members, smallest class first.
    pub fn members(&self) -> impl Iterator<Item = &F::Set> {
        self.classes.iter().flatten()
    }

    /// Number of zero-mass probe members.
    pub fn probe_count(&self) -> usize {
        self.probes
    }

    /// Initial overlay mass of a set (zero when absent).
    pub fn mass(&self, set: &F::Set) -> f64 {
        self.masses.get(set).copied().unwrap_or(0.0)
    }

    pub(crate) fn overlay(&self) -> &BTreeMap<F::Set, f64> {
        &self.masses
    }
}

/// Bel(A) = m(A) + mass of the proper subsets of A found in the classes below
/// |A|.
pub fn bel_partition<F: Space>(
    p: &CardinalityPartition<F>,
    a: &F::Set,
    counter: &mut OpCounter,
) -> Result<f64> {
    p.body.check_set(a)?;
    counter.visit(Phase::Query);
    if a.is_empty() {
        return Ok(0.0);
    }
    let mut total = p.mass(a);
    for class in &p.classes[..a.cardinality() - 1] {
        for b in class {
            counter.visit(Phase::Query);
            if b.is_subset(a) {
                total += p.mass(b);
            }
        }
    }
    Ok(total)
}

/// Q(A) = m(A) + mass of the proper supersets of A found in the classes above
/// |A|.
pub fn q_partition<F: Space>(
    p: &CardinalityPartition<F>,
    a: &F::Set,
    counter: &mut OpCounter,
) -> Result<f64> {
    p.body.check_set(a)?;
    counter.visit(Phase::Query);
    let mut total = p.mass(a);
    for class in &p.classes[a.cardinality()..] {
        for b in class {
            counter.visit(Phase::Query);
            if a.is_subset(b) {
                total += p.mass(b);
            }
        }
    }
    Ok(total)
}

/// Pl(A) = 1 − Bel(Ā), with Bel taken from the partition.
pub fn pl_partition<F: Space>(
    p: &CardinalityPartition<F>,
    a: &F::Set,
    counter: &mut OpCounter,
) -> Result<f64> {
    p.body.require_normalized()?;
    p.body.check_set(a)?;
    let complement = p.body.frame().complement(a);
    Ok(1.0 - bel_partition(p, &complement, counter)?)
}
