use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ballot::{Alternative, Ballot};
use crate::error::{Error, Result};
use crate::MAX_ALTERNATIVES;

/// A nonempty set of alternatives stored as a bitmask (bit `a` set iff `a` is a member).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct OutcomeSet(u8);

impl OutcomeSet {
    pub fn from_mask(mask: u8) -> Result<Self> {
        if mask == 0 {
            return Err(Error::domain("outcome set must be nonempty"));
        }
        Ok(OutcomeSet(mask))
    }

    pub(crate) const fn from_mask_unchecked(mask: u8) -> Self {
        OutcomeSet(mask)
    }

    pub fn singleton(a: Alternative) -> Self {
        OutcomeSet(1 << a.0)
    }

    /// All of `0..m`.
    pub fn full(m: usize) -> Self {
        debug_assert!(m >= 1 && m <= MAX_ALTERNATIVES);
        OutcomeSet(((1u16 << m) - 1) as u8)
    }

    pub fn from_alternatives<I: IntoIterator<Item = Alternative>>(alts: I) -> Result<Self> {
        let mut mask = 0u8;
        for a in alts {
            if a.index() >= MAX_ALTERNATIVES {
                return Err(Error::domain(format!("alternative {a} out of range")));
            }
            mask |= 1 << a.0;
        }
        OutcomeSet::from_mask(mask)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn contains(self, a: Alternative) -> bool {
        a.index() < 8 && self.0 >> a.0 & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_singleton(self) -> bool {
        self.0.is_power_of_two()
    }

    pub fn union(self, other: OutcomeSet) -> OutcomeSet {
        OutcomeSet(self.0 | other.0)
    }

    /// Every member is below `m`.
    pub fn fits(self, m: usize) -> bool {
        m >= 8 || self.0 >> m == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Alternative> {
        (0..8u8).filter(move |a| self.0 >> a & 1 == 1).map(Alternative)
    }
}

impl TryFrom<u8> for OutcomeSet {
    type Error = Error;

    fn try_from(mask: u8) -> Result<Self> {
        OutcomeSet::from_mask(mask)
    }
}

impl From<OutcomeSet> for u8 {
    fn from(s: OutcomeSet) -> u8 {
        s.0
    }
}

impl fmt::Display for OutcomeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

fn check_fits(ballot: &Ballot, w: OutcomeSet) -> Result<()> {
    if !w.fits(ballot.m()) {
        return Err(Error::domain(format!(
            "outcome set {w} has members outside 0..{}",
            ballot.m()
        )));
    }
    Ok(())
}

/// The member of `w` ranked highest on `ballot`.
pub fn best(ballot: &Ballot, w: OutcomeSet) -> Result<Alternative> {
    check_fits(ballot, w)?;
    Ok(ballot
        .ranking()
        .find(|&a| w.contains(a))
        .expect("nonempty set has a best member"))
}

/// The member of `w` ranked lowest on `ballot`.
pub fn worst(ballot: &Ballot, w: OutcomeSet) -> Result<Alternative> {
    check_fits(ballot, w)?;
    Ok(ballot
        .ranking()
        .rev()
        .find(|&a| w.contains(a))
        .expect("nonempty set has a worst member"))
}

/// `x` is weakly preferred to `y` by an optimist holding `ballot`.
pub fn optimist_ge(x: OutcomeSet, y: OutcomeSet, ballot: &Ballot) -> Result<bool> {
    let (bx, by) = (best(ballot, x)?, best(ballot, y)?);
    Ok(ballot.position(bx) <= ballot.position(by))
}

/// `x` is weakly preferred to `y` by a pessimist holding `ballot`.
pub fn pessimist_ge(x: OutcomeSet, y: OutcomeSet, ballot: &Ballot) -> Result<bool> {
    let (wx, wy) = (worst(ballot, x)?, worst(ballot, y)?);
    Ok(ballot.position(wx) <= ballot.position(wy))
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Alternative = Alternative(0);
    const B: Alternative = Alternative(1);
    const C: Alternative = Alternative(2);

    fn set(alts: &[Alternative]) -> OutcomeSet {
        OutcomeSet::from_alternatives(alts.iter().copied()).unwrap()
    }

    fn abc() -> Ballot {
        Ballot::identity(3)
    }

    #[test]
    fn best_examples() {
        assert_eq!(best(&abc(), set(&[B, C])).unwrap(), B);
        assert_eq!(best(&abc(), set(&[A, B, C])).unwrap(), A);
        assert_eq!(best(&abc(), set(&[C])).unwrap(), C);
    }

    #[test]
    fn worst_examples() {
        assert_eq!(worst(&abc(), set(&[A, B])).unwrap(), B);
        assert_eq!(worst(&abc(), set(&[A, B, C])).unwrap(), C);
        assert_eq!(worst(&abc(), set(&[C])).unwrap(), C);
    }

    #[test]
    fn empty_and_out_of_range_sets_rejected() {
        assert!(OutcomeSet::from_mask(0).is_err());
        assert!(best(&abc(), OutcomeSet::from_mask(0b1000).unwrap()).is_err());
        assert!(worst(&abc(), OutcomeSet::from_mask(0b1001).unwrap()).is_err());
    }

    #[test]
    fn optimist_examples() {
        let b = abc();
        assert!(optimist_ge(set(&[A, C]), set(&[B]), &b).unwrap());
        assert!(optimist_ge(set(&[B, C]), set(&[B]), &b).unwrap());
        assert!(optimist_ge(set(&[B]), set(&[B, C]), &b).unwrap());
        assert!(!optimist_ge(set(&[C]), set(&[A, C]), &b).unwrap());
    }

    #[test]
    fn pessimist_examples() {
        let b = abc();
        assert!(pessimist_ge(set(&[A, B]), set(&[A, C]), &b).unwrap());
        assert!(!pessimist_ge(set(&[A, C]), set(&[B]), &b).unwrap());
        assert!(pessimist_ge(set(&[A, C]), set(&[A, C]), &b).unwrap());
    }

    #[test]
    fn set_orders_are_total_preorders() {
        let sets: Vec<OutcomeSet> = (1..8u8).map(|m| OutcomeSet::from_mask(m).unwrap()).collect();
        for r in 0..6 {
            let ballot = Ballot::from_rank(r, 3).unwrap();
            for ge in [optimist_ge, pessimist_ge] {
                for &x in &sets {
                    assert!(ge(x, x, &ballot).unwrap());
                    for &y in &sets {
                        let xy = ge(x, y, &ballot).unwrap();
                        assert!(xy || ge(y, x, &ballot).unwrap());
                        for &z in &sets {
                            if xy && ge(y, z, &ballot).unwrap() {
                                assert!(ge(x, z, &ballot).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn best_worst_coherence() {
        for r in 0..24 {
            let ballot = Ballot::from_rank(r, 4).unwrap();
            for mask in 1..16u8 {
                let w = OutcomeSet::from_mask(mask).unwrap();
                let (hi, lo) = (best(&ballot, w).unwrap(), worst(&ballot, w).unwrap());
                assert!(w.contains(hi) && w.contains(lo));
                assert!(ballot.position(hi) <= ballot.position(lo));
                assert_eq!(hi == lo, w.len() == 1);
            }
        }
    }
}
