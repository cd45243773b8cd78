//! Dense commonality vectors over the whole power set, and the superset-sum
//! (zeta) transform with its Möbius inverse.

use std::collections::BTreeMap;

use crate::body::{Body, MASS_TOLERANCE};
use crate::error::{EvidenceError, Result};
use crate::frame::Space;
use crate::metrics::{OpCounter, Phase};

/// Largest frame for which the power set is enumerated (2^20 entries).
pub const MAX_POWER_SET_FRAME: usize = 20;

/// Recovered masses with magnitude below this are treated as exact zeros.
const ZERO_MASS: f64 = 1e-12;

/// One real per subset of the frame, indexed by subset mask.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSetVector<F: Space> {
    frame: F,
    values: Vec<f64>,
}

pub(crate) fn check_enumerable<F: Space>(frame: &F) -> Result<()> {
    if frame.size() > MAX_POWER_SET_FRAME {
        Err(EvidenceError::FrameTooLarge {
            size: frame.size(),
            max: MAX_POWER_SET_FRAME,
        })
    } else {
        Ok(())
    }
}

impl<F: Space> PowerSetVector<F> {
    pub fn new(frame: F, values: Vec<f64>) -> Result<Self> {
        check_enumerable(&frame)?;
        if values.len() != 1 << frame.size() {
            return Err(EvidenceError::InvalidFrame(format!(
                "power-set vector needs {} entries, got {}",
                1usize << frame.size(),
                values.len()
            )));
        }
        Ok(PowerSetVector { frame, values })
    }

    pub fn frame(&self) -> &F {
        &self.frame
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, set: &F::Set) -> f64 {
        self.values[self.frame.set_to_mask(set) as usize]
    }

    /// Pointwise product.
    pub fn product(&self, other: &Self, counter: &mut OpCounter) -> Result<Self> {
        if self.frame != other.frame {
            return Err(EvidenceError::FrameMismatch);
        }
        counter.visits(Phase::Transform, self.values.len() as u64);
        Ok(PowerSetVector {
            frame: self.frame.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }
}

/// In place: `v[A] <- Σ_{B ⊇ A} v[B]`.
fn superset_sums(values: &mut [f64], bits: usize, counter: &mut OpCounter) {
    for bit in (0..bits).map(|i| 1usize << i) {
        for mask in 0..values.len() {
            if mask & bit == 0 {
                values[mask] += values[mask | bit];
            }
        }
    }
    counter.visits(Phase::Transform, (bits as u64) << bits.saturating_sub(1));
}

/// In place inverse of [`superset_sums`].
fn inverse_superset_sums(values: &mut [f64], bits: usize, counter: &mut OpCounter) {
    for bit in (0..bits).map(|i| 1usize << i) {
        for mask in 0..values.len() {
            if mask & bit == 0 {
                values[mask] -= values[mask | bit];
            }
        }
    }
    counter.visits(Phase::Transform, (bits as u64) << bits.saturating_sub(1));
}

/// Q(A) for every subset A of the frame.
pub fn zeta_transform_q<F: Space>(body: &Body<F>) -> Result<PowerSetVector<F>> {
    zeta_counted(body, &mut OpCounter::new())
}

pub(crate) fn zeta_counted<F: Space>(
    body: &Body<F>,
    counter: &mut OpCounter,
) -> Result<PowerSetVector<F>> {
    let frame = body.frame().clone();
    check_enumerable(&frame)?;
    let n = frame.size();
    let mut values = vec![0.0; 1 << n];
    for (set, m) in body.iter() {
        values[frame.set_to_mask(set) as usize] += m;
    }
    superset_sums(&mut values, n, counter);
    Ok(PowerSetVector { frame, values })
}

/// Recovers the mass assignment from a commonality vector.
pub fn moebius_invert_q<F: Space>(q: &PowerSetVector<F>) -> Result<Body<F>> {
    moebius_counted(q, &mut OpCounter::new())
}

pub(crate) fn moebius_counted<F: Space>(
    q: &PowerSetVector<F>,
    counter: &mut OpCounter,
) -> Result<Body<F>> {
    let mut values = q.values.clone();
    inverse_superset_sums(&mut values, q.frame.size(), counter);
    let mut masses = BTreeMap::new();
    for (mask, m) in values.into_iter().enumerate() {
        if m < -MASS_TOLERANCE {
            return Err(EvidenceError::NegativeMass { mass: m });
        }
        if m > ZERO_MASS {
            masses.insert(q.frame.set_from_mask(mask as u64), m);
        }
    }
    Ok(Body::from_masses(q.frame.clone(), masses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{q_brute, BodyOfEvidence};
    use crate::frame::Frame;
    use crate::set::{FocalSet, SetLike};
    use proptest::prelude::*;

    fn abc() -> Frame {
        Frame::new(["a", "b", "c"]).unwrap()
    }

    fn e1() -> BodyOfEvidence {
        BodyOfEvidence::from_labels(&abc(), &[(&["a", "b"], 0.6), (&["b", "c"], 0.4)]).unwrap()
    }

    fn e2() -> BodyOfEvidence {
        BodyOfEvidence::from_labels(&abc(), &[(&["b"], 0.5), (&["a", "c"], 0.5)]).unwrap()
    }

    /// Direct inversion m(A) = Σ_{B ⊆ Ā} (−1)^{|B|} Q(A ∪ B).
    fn moebius_direct(q: &[f64], n: usize) -> Vec<f64> {
        let full = (1u64 << n) - 1;
        (0..1u64 << n)
            .map(|a| {
                let comp = full & !a;
                let mut total = 0.0;
                let mut b = comp;
                loop {
                    let sign = if b.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
                    total += sign * q[(a | b) as usize];
                    if b == 0 {
                        break;
                    }
                    b = (b - 1) & comp;
                }
                total
            })
            .collect()
    }

    #[test]
    fn zeta_matches_brute_on_e1() {
        let f = abc();
        let q = zeta_transform_q(&e1()).unwrap();
        assert!((q.get(&f.set(["b"]).unwrap()) - 1.0).abs() < 1e-12);
        assert_eq!(q.get(&f.set(["a", "c"]).unwrap()), 0.0);
        assert!((q.get(&FocalSet::EMPTY) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zeta_of_vacuous_and_omega_mass() {
        let q = zeta_transform_q(&Body::vacuous(abc())).unwrap();
        assert!(q.values().iter().all(|&v| v == 1.0));
        let f = abc();
        let b = BodyOfEvidence::from_labels(&f, &[(&["a", "b", "c"], 0.3), (&["a"], 0.7)]).unwrap();
        assert!((zeta_transform_q(&b).unwrap().get(&f.full_set()) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn moebius_round_trips() {
        assert!(moebius_invert_q(&zeta_transform_q(&e1()).unwrap()).unwrap().approx_eq(&e1()));
        assert!(moebius_invert_q(&zeta_transform_q(&e2()).unwrap()).unwrap().approx_eq(&e2()));
        let ab = Frame::new(["a", "b"]).unwrap();
        let constant = PowerSetVector::new(ab.clone(), vec![1.0; 4]).unwrap();
        assert_eq!(moebius_invert_q(&constant).unwrap(), Body::vacuous(ab));
    }

    #[test]
    fn rejects_non_commonality_and_large_frames() {
        let ab = Frame::new(["a", "b"]).unwrap();
        // Q({a}) < Q(Ω) is impossible
        let bad = PowerSetVector::new(ab.clone(), vec![1.0, 0.1, 0.5, 0.5]).unwrap();
        assert!(matches!(moebius_invert_q(&bad), Err(EvidenceError::NegativeMass { .. })));
        assert!(PowerSetVector::new(ab, vec![1.0; 3]).is_err());
        let big = Frame::new((0..21).map(|i| i.to_string())).unwrap();
        assert!(matches!(
            zeta_transform_q(&Body::vacuous(big)),
            Err(EvidenceError::FrameTooLarge { size: 21, .. })
        ));
    }

    fn arb_body() -> impl Strategy<Value = BodyOfEvidence> {
        (1usize..=8).prop_flat_map(|n| {
            proptest::collection::btree_map(0..1u64 << n, 1u32..1000, 1..20).prop_map(move |raw| {
                let frame = Frame::new((0..n).map(|i| format!("e{i}"))).unwrap();
                let total: u32 = raw.values().sum();
                Body::new(
                    frame,
                    raw.into_iter()
                        .map(|(m, w)| (FocalSet::from_mask(m), w as f64 / total as f64)),
                )
                .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn zeta_agrees_with_q_brute(body in arb_body()) {
            let q = zeta_transform_q(&body).unwrap();
            let c = &mut OpCounter::new();
            for mask in 0..q.values().len() as u64 {
                let a = FocalSet::from_mask(mask);
                prop_assert!((q.get(&a) - q_brute(&body, &a, c).unwrap()).abs() <= MASS_TOLERANCE);
            }
        }

        #[test]
        fn fast_inverse_matches_direct_formula(body in arb_body()) {
            let q = zeta_transform_q(&body).unwrap();
            let n = body.frame().size();
            let direct = moebius_direct(q.values(), n);
            for (mask, m) in direct.iter().enumerate() {
                prop_assert!((m - body.mass(&FocalSet::from_mask(mask as u64))).abs() <= MASS_TOLERANCE);
            }
            prop_assert!(moebius_invert_q(&q).unwrap().approx_eq(&body));
        }
    }

    #[test]
    fn empty_set_mass_round_trips() {
        let f = abc();
        let b = Body::new(f.clone(), vec![(FocalSet::EMPTY, 0.25), (f.set(["a"]).unwrap(), 0.75)]).unwrap();
        let back = moebius_invert_q(&zeta_transform_q(&b).unwrap()).unwrap();
        assert!(back.approx_eq(&b));
        assert!(back.focal_sets().any(|s| s.is_empty()));
    }
}
