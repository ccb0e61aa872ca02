use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ballot::Ballot;
use crate::ds::Lottery;
use crate::error::{Error, Result};
use crate::outcome::OutcomeSet;
use crate::profile::{Profile, ProfileSpace};
use crate::MAX_ALTERNATIVES;

/// Largest weight a seeded model draws for a single alternative.
const MAX_RANDOM_WEIGHT: u64 = 8;

/// How each voter turns an outcome set into a lottery over it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProbabilityModel {
    /// 1/2 on the voter's best member, 1/2 on the worst (1 on singletons).
    HalfHalf,
    UniformOverSet,
    /// Random positive weights on the extremes, random nonnegative weights
    /// elsewhere, derived from `(seed, voter, profile index, set)`.
    SeededRandom { seed: u64 },
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-sensitive hash of a sequence of words.
pub(crate) fn mix(words: &[u64]) -> u64 {
    words.iter().fold(0x5eed_u64, |h, &w| splitmix(h ^ splitmix(w)))
}

impl ProbabilityModel {
    /// Lottery for `voter` (holding the ballot `order`) at profile `index`
    /// facing outcome set `x`. No validation.
    pub(crate) fn raw_lottery(&self, voter: usize, index: u64, order: &[u8], x: OutcomeSet) -> Lottery {
        let mut weights = [0u64; MAX_ALTERNATIVES];
        let mask = x.mask();
        let mut members = order.iter().copied().filter(|&a| mask >> a & 1 == 1);
        match *self {
            ProbabilityModel::HalfHalf => {
                let hi = members.next().expect("nonempty set");
                let lo = members.last().unwrap_or(hi);
                weights[hi as usize] += 1;
                weights[lo as usize] += 1;
            }
            ProbabilityModel::UniformOverSet => {
                for a in members {
                    weights[a as usize] = 1;
                }
            }
            ProbabilityModel::SeededRandom { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(mix(&[seed, voter as u64, index, mask as u64]));
                let members: Vec<u8> = members.collect();
                let last = members.len() - 1;
                for (i, &a) in members.iter().enumerate() {
                    let lo = if i == 0 || i == last { 1 } else { 0 };
                    weights[a as usize] = rng.gen_range(lo..=MAX_RANDOM_WEIGHT);
                }
            }
        }
        Lottery::from_weights(x, weights)
    }

    pub(crate) fn checked_lottery(
        &self,
        voter: usize,
        index: u64,
        ballot: &Ballot,
        x: OutcomeSet,
    ) -> Result<Lottery> {
        let l = self.raw_lottery(voter, index, ballot.as_slice(), x);
        l.validate_for(ballot, x)?;
        Ok(l)
    }

    pub fn name(&self) -> String {
        match self {
            ProbabilityModel::HalfHalf => "half".into(),
            ProbabilityModel::UniformOverSet => "uniform".into(),
            ProbabilityModel::SeededRandom { seed } => format!("random:{seed}"),
        }
    }
}

/// The lottery `model` assigns to `voter` at profile `p` over outcome set `x`.
pub fn lottery_of(model: &ProbabilityModel, voter: usize, p: &Profile, x: OutcomeSet) -> Result<Lottery> {
    if voter >= p.n() {
        return Err(Error::domain(format!("voter {voter} out of range")));
    }
    if !x.fits(p.m()) {
        return Err(Error::domain(format!("{x} has members outside 0..{}", p.m())));
    }
    let index = ProfileSpace::new(p.n(), p.m())?.index(p)?;
    model.checked_lottery(voter, index, p.ballot(voter), x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballot::Alternative;
    use crate::ds::Rational;

    fn half() -> Rational {
        Rational::new(1.into(), 2.into())
    }

    fn abc_profile() -> Profile {
        Profile::new(vec![Ballot::identity(3)]).unwrap()
    }

    #[test]
    fn half_half_full_set() {
        let l = lottery_of(&ProbabilityModel::HalfHalf, 0, &abc_profile(), OutcomeSet::full(3)).unwrap();
        assert_eq!(l.probs(), vec![(Alternative(0), half()), (Alternative(2), half())]);
    }

    #[test]
    fn half_half_singleton() {
        let x = OutcomeSet::singleton(Alternative(1));
        let l = lottery_of(&ProbabilityModel::HalfHalf, 0, &abc_profile(), x).unwrap();
        assert_eq!(l.probs(), vec![(Alternative(1), Rational::from_integer(1.into()))]);
    }

    #[test]
    fn uniform_pair() {
        let x = OutcomeSet::from_mask(0b101).unwrap();
        let l = lottery_of(&ProbabilityModel::UniformOverSet, 0, &abc_profile(), x).unwrap();
        assert_eq!(l.probs(), vec![(Alternative(0), half()), (Alternative(2), half())]);
    }

    #[test]
    fn seeded_is_deterministic_and_valid() {
        let m = ProbabilityModel::SeededRandom { seed: 7 };
        let space = ProfileSpace::new(2, 3).unwrap();
        for idx in 0..space.size() {
            let p = space.decode(idx).unwrap();
            for mask in 1..8u8 {
                let x = OutcomeSet::from_mask(mask).unwrap();
                for v in 0..2 {
                    let a = lottery_of(&m, v, &p, x).unwrap();
                    assert_eq!(a, lottery_of(&m, v, &p, x).unwrap());
                }
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = abc_profile();
        assert!(lottery_of(&ProbabilityModel::HalfHalf, 1, &p, OutcomeSet::full(3)).is_err());
        assert!(lottery_of(&ProbabilityModel::HalfHalf, 0, &p, OutcomeSet::full(4)).is_err());
    }
}
