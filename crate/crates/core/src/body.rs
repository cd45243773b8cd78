//! Bodies of evidence and the brute-force belief measures.

use std::collections::BTreeMap;

use crate::error::{EvidenceError, Result};
use crate::frame::{Frame, Space};
use crate::metrics::{OpCounter, Phase};
use crate::set::{FocalSet, SetLike};

/// Absolute tolerance for every mass comparison.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// How strictly [`Body::with_check`] validates the mass total.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MassCheck {
    /// Masses must sum to 1 within [`MASS_TOLERANCE`].
    SumToOne,
    /// Only positivity is checked.
    Unnormalized,
}

/// A mass assignment over focal sets of a frame: the pair (F, m).
///
/// Every stored mass is strictly positive. The empty set may carry mass.
#[derive(Clone, Debug, PartialEq)]
pub struct Body<F: Space> {
    frame: F,
    masses: BTreeMap<F::Set, f64>,
}

/// A body over a single frame.
pub type BodyOfEvidence = Body<Frame>;

impl<F: Space> Body<F> {
    /// Validated constructor requiring the masses to sum to 1.
    pub fn new<I>(frame: F, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (F::Set, f64)>,
    {
        Self::with_check(frame, entries, MassCheck::SumToOne)
    }

    pub fn with_check<I>(frame: F, entries: I, check: MassCheck) -> Result<Self>
    where
        I: IntoIterator<Item = (F::Set, f64)>,
    {
        let mut masses = BTreeMap::new();
        for (set, mass) in entries {
            if !frame.fits(&set) {
                return Err(EvidenceError::ElementOutOfRange);
            }
            if !mass.is_finite() || mass <= 0.0 {
                return Err(EvidenceError::NonPositiveMass {
                    set: frame.render_set(&set),
                    mass,
                });
            }
            if masses.contains_key(&set) {
                return Err(EvidenceError::DuplicateFocal(frame.render_set(&set)));
            }
            masses.insert(set, mass);
        }
        let body = Body { frame, masses };
        if check == MassCheck::SumToOne {
            let sum = body.total_mass();
            if (sum - 1.0).abs() > MASS_TOLERANCE {
                return Err(EvidenceError::MassSumViolation { sum });
            }
        }
        Ok(body)
    }

    /// The vacuous body m(Ω) = 1.
    pub fn vacuous(frame: F) -> Self {
        let full = frame.full_set();
        Body {
            frame,
            masses: BTreeMap::from([(full, 1.0)]),
        }
    }

    /// Internal constructor for computed results; drops non-positive entries.
    pub(crate) fn from_masses(frame: F, masses: BTreeMap<F::Set, f64>) -> Self {
        let masses = masses.into_iter().filter(|(_, m)| *m > 0.0).collect();
        Body { frame, masses }
    }

    pub fn frame(&self) -> &F {
        &self.frame
    }

    /// Number of focal elements, the empty set included.
    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// Focal sets and masses in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&F::Set, f64)> {
        self.masses.iter().map(|(s, &m)| (s, m))
    }

    pub fn focal_sets(&self) -> impl Iterator<Item = &F::Set> {
        self.masses.keys()
    }

    pub fn masses(&self) -> &BTreeMap<F::Set, f64> {
        &self.masses
    }

    /// m(A), zero when A is not focal.
    pub fn mass(&self, set: &F::Set) -> f64 {
        self.masses.get(set).copied().unwrap_or(0.0)
    }

    pub fn empty_mass(&self) -> f64 {
        self.mass(&self.frame.empty_set())
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.values().sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.empty_mass() <= MASS_TOLERANCE
    }

    /// Union of all focal elements.
    pub fn focal_union(&self) -> F::Set {
        self.masses
            .keys()
            .fold(self.frame.empty_set(), |acc, s| acc.union(s))
    }

    pub fn check_set(&self, set: &F::Set) -> Result<()> {
        if self.frame.fits(set) {
            Ok(())
        } else {
            Err(EvidenceError::FrameMismatch)
        }
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(EvidenceError::UnnormalizedBody {
                empty_mass: self.empty_mass(),
            })
        }
    }

    /// Largest absolute difference in mass over the union of both focal
    /// families.
    pub fn max_mass_difference(&self, other: &Body<F>) -> f64 {
        let mut diff: f64 = 0.0;
        for (s, m) in &self.masses {
            diff = diff.max((m - other.mass(s)).abs());
        }
        for (s, m) in &other.masses {
            diff = diff.max((m - self.mass(s)).abs());
        }
        diff
    }

    pub fn approx_eq(&self, other: &Body<F>) -> bool {
        self.frame == other.frame && self.max_mass_difference(other) <= MASS_TOLERANCE
    }
}

/// Builds a validated body. `unnormalized` skips the sum check.
pub fn make_body<F: Space>(
    frame: F,
    entries: Vec<(F::Set, f64)>,
    unnormalized: bool,
) -> Result<Body<F>> {
    let check = if unnormalized {
        MassCheck::Unnormalized
    } else {
        MassCheck::SumToOne
    };
    Body::with_check(frame, entries, check)
}

fn sum_where<F: Space>(
    body: &Body<F>,
    a: &F::Set,
    counter: &mut OpCounter,
    keep: impl Fn(&F::Set, &F::Set) -> bool,
) -> Result<f64> {
    body.check_set(a)?;
    let mut total = 0.0;
    for (b, m) in body.iter() {
        counter.visit(Phase::Query);
        if keep(b, a) {
            total += m;
        }
    }
    Ok(total)
}

/// Bel(A): mass of the non-empty subsets of A.
pub fn bel_brute<F: Space>(body: &Body<F>, a: &F::Set, counter: &mut OpCounter) -> Result<f64> {
    sum_where(body, a, counter, |b, a| !b.is_empty() && b.is_subset(a))
}

/// Pl(A): mass of the sets meeting A.
pub fn pl_brute<F: Space>(body: &Body<F>, a: &F::Set, counter: &mut OpCounter) -> Result<f64> {
    sum_where(body, a, counter, |b, a| b.intersects(a))
}

/// Q(A): mass of the supersets of A.
pub fn q_brute<F: Space>(body: &Body<F>, a: &F::Set, counter: &mut OpCounter) -> Result<f64> {
    sum_where(body, a, counter, |b, a| a.is_subset(b))
}

/// Bel(A) as 1 − Pl(Ā).
pub fn duality_bel_from_pl<F: Space>(
    body: &Body<F>,
    a: &F::Set,
    counter: &mut OpCounter,
) -> Result<f64> {
    body.require_normalized()?;
    body.check_set(a)?;
    let complement = body.frame().complement(a);
    Ok(1.0 - pl_brute(body, &complement, counter)?)
}

/// The body (¬F, m̄) with m̄(A) = m(Ā).
pub fn complement_body<F: Space>(body: &Body<F>) -> Body<F> {
    complement_body_counted(body, &mut OpCounter::new())
}

pub(crate) fn complement_body_counted<F: Space>(body: &Body<F>, counter: &mut OpCounter) -> Body<F> {
    let frame = body.frame().clone();
    let masses = body
        .iter()
        .map(|(s, m)| {
            counter.visit(Phase::Complement);
            (frame.complement(s), m)
        })
        .collect();
    Body { frame, masses }
}

/// Drops the empty set and rescales by K = 1 − m(∅). Returns the body and K.
pub fn normalize<F: Space>(body: &Body<F>) -> Result<(Body<F>, f64)> {
    let conflict = body.empty_mass();
    if conflict >= 1.0 - MASS_TOLERANCE {
        return Err(EvidenceError::TotalConflict);
    }
    let k = 1.0 - conflict;
    let masses = body
        .iter()
        .filter(|(s, _)| !s.is_empty())
        .map(|(s, m)| (s.clone(), m / k))
        .collect();
    Ok((
        Body {
            frame: body.frame().clone(),
            masses,
        },
        k,
    ))
}

impl BodyOfEvidence {
    /// Uniform masses over every non-empty subset of the frame.
    pub fn complete(frame: Frame) -> Result<Self> {
        crate::transform::check_enumerable(&frame)?;
        let k = (1u64 << frame.size()) - 1;
        let m = 1.0 / k as f64;
        let masses = (1..=k).map(|mask| (FocalSet::from_mask(mask), m)).collect();
        Ok(Body::from_masses(frame, masses))
    }

    /// Convenience constructor from label lists.
    pub fn from_labels(frame: &Frame, entries: &[(&[&str], f64)]) -> Result<Self> {
        let entries = entries
            .iter()
            .map(|(labels, m)| Ok((frame.set(labels.iter().copied())?, *m)))
            .collect::<Result<Vec<_>>>()?;
        Body::new(frame.clone(), entries)
    }
}
