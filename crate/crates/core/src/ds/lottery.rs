use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::ballot::{Alternative, Ballot};
use crate::ds::Rational;
use crate::error::{Error, Result};
use crate::outcome::{best, worst, OutcomeSet};
use crate::MAX_ALTERNATIVES;

/// A probability distribution over an outcome set, stored as integer
/// weights over a common denominator so comparisons stay exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lottery {
    set: OutcomeSet,
    weights: [u64; MAX_ALTERNATIVES],
    denom: u64,
}

impl Lottery {
    /// Weights must be zero outside `set` and sum to a positive denominator.
    pub(crate) fn from_weights(set: OutcomeSet, weights: [u64; MAX_ALTERNATIVES]) -> Self {
        let denom = weights.iter().sum();
        debug_assert!(denom > 0);
        Lottery {
            set,
            weights,
            denom,
        }
    }

    pub fn point(a: Alternative) -> Self {
        let mut weights = [0; MAX_ALTERNATIVES];
        weights[a.index()] = 1;
        Lottery::from_weights(OutcomeSet::singleton(a), weights)
    }

    /// Builds a lottery over `set` from explicit probabilities.
    ///
    /// Alternatives of `set` that are not listed get probability zero.
    pub fn from_probs(set: OutcomeSet, probs: &[(Alternative, Rational)]) -> Result<Self> {
        let mut lcm = BigInt::one();
        for (a, p) in probs {
            if !set.contains(*a) {
                return Err(Error::domain(format!("alternative {a} is not in {set}")));
            }
            if p.is_negative() {
                return Err(Error::domain(format!("negative probability {p} for {a}")));
            }
            lcm = lcm.lcm(p.denom());
        }
        let denom = lcm
            .to_u64()
            .ok_or_else(|| Error::domain("probability denominators too large"))?;
        let mut weights = [0u64; MAX_ALTERNATIVES];
        for (a, p) in probs {
            let w = (p.numer() * (&lcm / p.denom()))
                .to_u64()
                .ok_or_else(|| Error::domain("probability weight too large"))?;
            weights[a.index()] += w;
        }
        let total: u64 = weights.iter().sum();
        if total != denom {
            return Err(Error::domain(format!(
                "probabilities sum to {total}/{denom}, not 1"
            )));
        }
        Ok(Lottery {
            set,
            weights,
            denom,
        })
    }

    /// The outcome set this lottery is drawn over.
    pub fn set(&self) -> OutcomeSet {
        self.set
    }

    pub fn denominator(&self) -> u64 {
        self.denom
    }

    pub fn weight(&self, a: Alternative) -> u64 {
        self.weights.get(a.index()).copied().unwrap_or(0)
    }

    pub fn prob(&self, a: Alternative) -> Rational {
        Rational::new(self.weight(a).into(), self.denom.into())
    }

    pub fn prob_f64(&self, a: Alternative) -> f64 {
        self.weight(a) as f64 / self.denom as f64
    }

    /// Alternatives with positive probability, ascending.
    pub fn support(&self) -> impl Iterator<Item = Alternative> + '_ {
        (0..MAX_ALTERNATIVES as u8)
            .map(Alternative)
            .filter(|a| self.weights[a.index()] > 0)
    }

    pub fn probs(&self) -> Vec<(Alternative, Rational)> {
        self.support().map(|a| (a, self.prob(a))).collect()
    }

    /// Numerator of the mass on the top `k` alternatives of `ballot`.
    pub(crate) fn upper_mass(&self, ballot: &[u8], k: usize) -> u64 {
        ballot[..k].iter().map(|&a| self.weights[a as usize]).sum()
    }

    /// Checks the probability-model constraints for a lottery assigned to a
    /// voter holding `ballot` facing outcome set `x`.
    pub fn validate_for(&self, ballot: &Ballot, x: OutcomeSet) -> Result<()> {
        if self.set != x {
            return Err(Error::ModelInvalid(format!(
                "lottery drawn over {} but assigned to {x}",
                self.set
            )));
        }
        if let Some(a) = self.support().find(|&a| !x.contains(a)) {
            return Err(Error::ModelInvalid(format!("support member {a} outside {x}")));
        }
        if self.denom == 0 || self.weights.iter().sum::<u64>() != self.denom {
            return Err(Error::ModelInvalid(format!(
                "probabilities over {x} do not sum to 1"
            )));
        }
        let hi = best(ballot, x)?;
        if self.weight(hi) == 0 {
            return Err(Error::ModelInvalid(format!(
                "best member {hi} of {x} has probability 0"
            )));
        }
        let lo = worst(ballot, x)?;
        if self.weight(lo) == 0 {
            return Err(Error::ModelInvalid(format!(
                "worst member {lo} of {x} has probability 0"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Lottery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.support().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}: {}/{}", self.weight(a), self.denom)?;
        }
        f.write_str("}")
    }
}

impl Serialize for Lottery {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        for a in self.support() {
            map.serialize_entry(&a.to_string(), &crate::ds::rational_string(&self.prob(a)))?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn zero() -> Rational {
        Rational::zero()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn from_probs_common_denominator() {
        let set = OutcomeSet::from_mask(0b011).unwrap();
        let l = Lottery::from_probs(set, &[(Alternative(0), r(1, 4)), (Alternative(1), r(3, 4))])
            .unwrap();
        assert_eq!(l.denominator(), 4);
        assert_eq!(l.prob(Alternative(1)), r(3, 4));
        assert_eq!(l.prob(Alternative(2)), zero());
    }

    #[test]
    fn from_probs_rejects_bad_input() {
        let set = OutcomeSet::from_mask(0b011).unwrap();
        assert!(Lottery::from_probs(set, &[(Alternative(0), r(1, 2))]).is_err());
        assert!(Lottery::from_probs(set, &[(Alternative(2), r(1, 1))]).is_err());
        assert!(
            Lottery::from_probs(set, &[(Alternative(0), r(-1, 2)), (Alternative(1), r(3, 2))])
                .is_err()
        );
    }

    #[test]
    fn validation_names_the_constraint() {
        let ballot = Ballot::identity(3);
        let x = OutcomeSet::full(3);
        let no_worst =
            Lottery::from_probs(x, &[(Alternative(0), r(1, 2)), (Alternative(1), r(1, 2))]).unwrap();
        let err = no_worst.validate_for(&ballot, x).unwrap_err();
        assert!(matches!(&err, Error::ModelInvalid(m) if m.contains("worst")));
        let no_best =
            Lottery::from_probs(x, &[(Alternative(2), r(1, 2)), (Alternative(1), r(1, 2))]).unwrap();
        assert!(matches!(no_best.validate_for(&ballot, x), Err(Error::ModelInvalid(m)) if m.contains("best")));
        let wrong_set = Lottery::point(Alternative(0));
        assert!(wrong_set.validate_for(&ballot, x).is_err());
    }
}
