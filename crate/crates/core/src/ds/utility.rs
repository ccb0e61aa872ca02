use num_traits::Zero;
use serde::Serialize;

use crate::ballot::{Alternative, Ballot};
use crate::ds::{rational_string, Lottery, Rational};
use crate::error::{Error, Result};

/// A cardinal utility over `0..m`, indexed by alternative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityFunction {
    values: Vec<Rational>,
}

impl UtilityFunction {
    pub fn new(values: Vec<Rational>) -> Self {
        UtilityFunction { values }
    }

    /// Builds from values listed along `ballot`, top first.
    pub fn along(ballot: &Ballot, by_position: Vec<Rational>) -> Self {
        let mut values = vec![Rational::zero(); ballot.m()];
        for (a, v) in ballot.ranking().zip(by_position) {
            values[a.index()] = v;
        }
        UtilityFunction { values }
    }

    pub fn m(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, a: Alternative) -> &Rational {
        &self.values[a.index()]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Strictly decreasing along `ballot`.
    pub fn is_consistent_with(&self, ballot: &Ballot) -> bool {
        self.m() == ballot.m()
            && ballot
                .as_slice()
                .windows(2)
                .all(|w| self.values[w[0] as usize] > self.values[w[1] as usize])
    }
}

impl Serialize for UtilityFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.values.iter().map(rational_string))
    }
}

/// Expected utility of `u` under lottery `l`.
pub fn expected_utility(l: &Lottery, u: &UtilityFunction) -> Result<Rational> {
    let mut total = Rational::zero();
    for a in l.support() {
        if a.index() >= u.m() {
            return Err(Error::domain(format!(
                "lottery support member {a} has no utility (m = {})",
                u.m()
            )));
        }
        total += l.prob(a) * u.value(a);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outcome::OutcomeSet;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn lottery(mask: u8, probs: &[(u8, i64, i64)]) -> Lottery {
        let probs: Vec<_> = probs.iter().map(|&(a, n, d)| (Alternative(a), r(n, d))).collect();
        Lottery::from_probs(OutcomeSet::from_mask(mask).unwrap(), &probs).unwrap()
    }

    #[test]
    fn expected_utility_examples() {
        let u = UtilityFunction::new(vec![r(3, 1), r(5, 1), r(1, 1)]);
        assert_eq!(expected_utility(&lottery(0b101, &[(0, 1, 2), (2, 1, 2)]), &u).unwrap(), r(2, 1));
        assert_eq!(expected_utility(&lottery(0b010, &[(1, 1, 1)]), &u).unwrap(), r(5, 1));
        let u2 = UtilityFunction::new(vec![r(4, 1), r(0, 1), r(9, 1)]);
        assert_eq!(expected_utility(&lottery(0b011, &[(0, 1, 4), (1, 3, 4)]), &u2).unwrap(), r(1, 1));
    }

    #[test]
    fn support_outside_domain() {
        let u = UtilityFunction::new(vec![r(1, 1), r(0, 1)]);
        assert!(expected_utility(&lottery(0b100, &[(2, 1, 1)]), &u).is_err());
    }

    #[test]
    fn consistency() {
        let ballot = Ballot::new(vec![2, 0, 1]).unwrap();
        assert!(UtilityFunction::along(&ballot, vec![r(3, 1), r(2, 1), r(1, 1)]).is_consistent_with(&ballot));
        assert!(!UtilityFunction::along(&ballot, vec![r(3, 1), r(3, 1), r(1, 1)]).is_consistent_with(&ballot));
        assert!(!UtilityFunction::new(vec![r(3, 1), r(2, 1), r(1, 1)]).is_consistent_with(&ballot));
    }
}
