//! First-order stochastic dominance with respect to a ballot.
//!
//! `l1` dominates `l2` iff for every consistent utility `u` the expected
//! utility of `l1` is at least that of `l2`. Every consistent utility is a
//! positive combination of upper-set indicators plus a constant, so checking
//! the `m` upper sets of the ballot decides the quantifier exactly.

use crate::ballot::Ballot;
use crate::ds::{Lottery, Rational, UtilityFunction};

/// Largest upper-set violation: `(k, numerator, denominator)` with the
/// deviating lottery placing `numerator/denominator` more mass on the top
/// `k` alternatives than the sincere one. `None` when `l1` dominates.
fn worst_violation(l1: &Lottery, l2: &Lottery, ballot: &Ballot) -> Option<(usize, u128, u128)> {
    let order = ballot.as_slice();
    let (d1, d2) = (l1.denominator() as u128, l2.denominator() as u128);
    let mut found: Option<(usize, u128, u128)> = None;
    for k in 1..order.len() {
        let c1 = l1.upper_mass(order, k) as u128 * d2;
        let c2 = l2.upper_mass(order, k) as u128 * d1;
        if c2 > c1 {
            let gap = c2 - c1;
            if found.is_none_or(|(_, g, _)| gap > g) {
                found = Some((k, gap, d1 * d2));
            }
        }
    }
    found
}

/// `l1` first-order stochastically dominates `l2` under `ballot`.
pub fn fosd_ge(l1: &Lottery, l2: &Lottery, ballot: &Ballot) -> bool {
    let order = ballot.as_slice();
    let (d1, d2) = (l1.denominator() as u128, l2.denominator() as u128);
    (1..order.len()).all(|k| l1.upper_mass(order, k) as u128 * d2 >= l2.upper_mass(order, k) as u128 * d1)
}

/// A utility consistent with `ballot` under which `l_deviate` has strictly
/// higher expected utility than `l_sincere`, if one exists.
///
/// Starts from the indicator of the most violated upper set `U` (gap `g`)
/// and adds `eta * (m - position)` with `eta = g / (4m)`, which makes it
/// strictly decreasing while moving either expectation by at most `g / 4`.
pub fn exists_advantageous_utility(
    l_sincere: &Lottery,
    l_deviate: &Lottery,
    ballot: &Ballot,
) -> Option<UtilityFunction> {
    let (k, gap, denom) = worst_violation(l_sincere, l_deviate, ballot)?;
    let m = ballot.m();
    let eta = Rational::new(gap.into(), (denom * 4 * m as u128).into());
    let values = (0..m)
        .map(|pos| {
            let step = &eta * Rational::from_integer(((m - pos) as u64).into());
            if pos < k {
                step + Rational::from_integer(1.into())
            } else {
                step
            }
        })
        .collect();
    Some(UtilityFunction::along(ballot, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballot::Alternative;
    use crate::ds::expected_utility;
    use crate::outcome::OutcomeSet;

    fn lot(probs: &[(u8, i64, i64)]) -> Lottery {
        let set = OutcomeSet::from_alternatives(probs.iter().map(|p| Alternative(p.0))).unwrap();
        let probs: Vec<_> = probs
            .iter()
            .map(|&(a, n, d)| (Alternative(a), Rational::new(n.into(), d.into())))
            .collect();
        Lottery::from_probs(set, &probs).unwrap()
    }

    fn abc() -> Ballot {
        Ballot::identity(3)
    }

    #[test]
    fn top_point_mass_dominates() {
        assert!(fosd_ge(&lot(&[(0, 1, 1)]), &lot(&[(0, 1, 2), (1, 1, 2)]), &abc()));
    }

    #[test]
    fn spread_does_not_dominate_middle() {
        // upper sets {a}: 1/2 vs 0, {a,b}: 1/2 vs 1
        assert!(!fosd_ge(&lot(&[(0, 1, 2), (2, 1, 2)]), &lot(&[(1, 1, 1)]), &abc()));
    }

    #[test]
    fn reflexive() {
        let l = lot(&[(0, 1, 3), (1, 1, 3), (2, 1, 3)]);
        assert!(fosd_ge(&l, &l, &abc()));
    }

    #[test]
    fn advantageous_utility_examples() {
        let sincere = lot(&[(1, 1, 1)]);
        let deviate = lot(&[(0, 1, 2), (2, 1, 2)]);
        let u = exists_advantageous_utility(&sincere, &deviate, &abc()).unwrap();
        assert!(u.is_consistent_with(&abc()));
        assert!(expected_utility(&deviate, &u).unwrap() > expected_utility(&sincere, &u).unwrap());

        let top = lot(&[(0, 1, 1)]);
        assert!(exists_advantageous_utility(&top, &deviate, &abc()).is_none());
        assert!(exists_advantageous_utility(&deviate, &deviate, &abc()).is_none());
    }
}
