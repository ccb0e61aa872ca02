//! Expected-utility manipulation witnesses.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::ballot::{Alternative, Ballot};
use crate::ds::{exists_advantageous_utility, expected_utility, fosd_ge, rational_string, ProbabilityModel, Rational, UtilityFunction};
use crate::error::{Error, Result};
use crate::manipulation::{Mode, TaylorManipulation};
use crate::outcome::{best, worst, OutcomeSet};
use crate::profile::Profile;
use crate::scc::Scc;

/// A voter, a misreport and a consistent utility under which the misreport
/// strictly raises expected utility, both lotteries taken at the sincere profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DsWitness {
    pub voter: usize,
    pub sincere_index: u64,
    pub sincere: Profile,
    pub deviation_ballot: Ballot,
    pub sincere_set: OutcomeSet,
    pub deviation_set: OutcomeSet,
    pub model: ProbabilityModel,
    pub utility: UtilityFunction,
    #[serde(serialize_with = "ser_rational")]
    pub eu_sincere: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub eu_deviate: Rational,
    /// Which extreme `epsilon` and `delta` refer to. `None` when the
    /// misreport improves neither the best nor the worst member, in which
    /// case they are the probabilities of the best members.
    pub extremes: Option<Mode>,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub delta: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(r))
}

impl DsWitness {
    pub fn deviation_profile(&self) -> Profile {
        self.sincere
            .with_ballot(self.voter, self.deviation_ballot.clone())
            .expect("deviation ballot matches profile")
    }
}

fn int(v: u64) -> Rational {
    Rational::from_integer(v.into())
}

/// Strictly decreasing base values in `(0, 1]`, by ballot position.
fn base_values(m: usize) -> Vec<Rational> {
    (0..m).map(|pos| Rational::new(((m - pos) as u64).into(), (m as u64).into())).collect()
}

/// Base values plus `boost` on every alternative weakly above `pivot`.
fn boosted(ballot: &Ballot, pivot: Alternative, boost: &Rational) -> UtilityFunction {
    let cut = ballot.position(pivot);
    let values = base_values(ballot.m())
        .into_iter()
        .enumerate()
        .map(|(pos, v)| if pos <= cut { v + boost } else { v })
        .collect();
    UtilityFunction::along(ballot, values)
}

fn check_prob(name: &str, p: &Rational) -> Result<()> {
    if *p <= Rational::zero() || *p > Rational::one() {
        return Err(Error::domain(format!("{name} = {p} outside (0, 1]")));
    }
    Ok(())
}

/// Utility for an optimistic manipulation from `x` to `y`.
///
/// With `a = best(x)` and `b = best(y)` ranked above `a`, every alternative
/// weakly above `b` gets `3 / delta` on top of a base value in `(0, 1]`.
/// Any lottery on `y` with mass `delta` at `b` then has expected utility at
/// least 3, while every lottery on `x` stays at or below `u(a) < 1`.
pub fn optimist_witness(
    epsilon: &Rational,
    delta: &Rational,
    ballot: &Ballot,
    x: OutcomeSet,
    y: OutcomeSet,
) -> Result<UtilityFunction> {
    check_prob("epsilon", epsilon)?;
    check_prob("delta", delta)?;
    let (a, b) = (best(ballot, x)?, best(ballot, y)?);
    if !ballot.prefers(b, a) {
        return Err(Error::domain(format!(
            "best of {y} ({b}) is not preferred to best of {x} ({a})"
        )));
    }
    Ok(boosted(ballot, b, &(int(3) / delta)))
}

/// `(1/eps + eps + 1) / (1 - eps)`, the pessimist value of `worst(y)`.
pub fn pessimist_pivot_value(epsilon: &Rational) -> Rational {
    let one = Rational::one();
    (epsilon.recip() + epsilon + &one) / (&one - epsilon)
}

/// `(1/eps + eps + 2) / (1 - eps)`, the pessimist value of `best(x)`.
pub fn pessimist_top_value(epsilon: &Rational) -> Rational {
    let one = Rational::one();
    (epsilon.recip() + epsilon + int(2)) / (&one - epsilon)
}

/// Utility for a pessimistic manipulation from `x` to `y`.
///
/// With `a = worst(x)`, `b = worst(y)` ranked above `a` and `c = best(x)`,
/// returns `u` with `u(b) > eps * u(a) + (1 - eps) * u(c)`. When `c` is
/// ranked above `b` the values are pinned at `u(a) = 1`,
/// `u(b) = (1/eps + eps + 1)/(1 - eps)`, `u(c) = (1/eps + eps + 2)/(1 - eps)`
/// and the remaining alternatives are interpolated by position. Otherwise
/// all of `x` sits weakly below `b` and the boost construction is used.
pub fn pessimist_witness(
    epsilon: &Rational,
    delta: &Rational,
    ballot: &Ballot,
    x: OutcomeSet,
    y: OutcomeSet,
) -> Result<UtilityFunction> {
    check_prob("epsilon", epsilon)?;
    check_prob("delta", delta)?;
    let (a, b, c) = (worst(ballot, x)?, worst(ballot, y)?, best(ballot, x)?);
    if !ballot.prefers(b, a) {
        return Err(Error::domain(format!(
            "worst of {y} ({b}) is not preferred to worst of {x} ({a})"
        )));
    }
    if !ballot.prefers(c, b) {
        return Ok(boosted(ballot, b, &int(3)));
    }
    if epsilon.is_one() {
        return Err(Error::domain(format!(
            "epsilon = 1 leaves no mass on best member {c} of {x}"
        )));
    }
    let one = Rational::one();
    let (pc, pb, pa) = (ballot.position(c), ballot.position(b), ballot.position(a));
    let (uc, ub, ua) = (pessimist_top_value(epsilon), pessimist_pivot_value(epsilon), one.clone());
    let m = ballot.m();
    let lerp = |hi: &Rational, lo: &Rational, from: usize, to: usize, pos: usize| {
        lo + (hi - lo) * Rational::new(((to - pos) as u64).into(), ((to - from) as u64).into())
    };
    let values = (0..m)
        .map(|pos| {
            if pos <= pc {
                &uc + int((pc - pos) as u64)
            } else if pos <= pb {
                lerp(&uc, &ub, pc, pb, pos)
            } else if pos <= pa {
                lerp(&ub, &ua, pb, pa, pos)
            } else {
                &ua - Rational::new(((pos - pa) as u64).into(), (m as u64).into())
            }
        })
        .collect();
    Ok(UtilityFunction::along(ballot, values))
}

fn relevant_extremes(ballot: &Ballot, x: OutcomeSet, y: OutcomeSet) -> Result<(Option<Mode>, Alternative, Alternative)> {
    let (bx, by) = (best(ballot, x)?, best(ballot, y)?);
    if ballot.prefers(by, bx) {
        return Ok((Some(Mode::Optimist), bx, by));
    }
    let (wx, wy) = (worst(ballot, x)?, worst(ballot, y)?);
    if ballot.prefers(wy, wx) {
        return Ok((Some(Mode::Pessimist), wx, wy));
    }
    Ok((None, bx, by))
}

/// First expected-utility manipulation of `f` under `model`, scanning voters,
/// then sincere profile indices, then deviation ranks. `None` means `f` is
/// strategy-proof for this model and every consistent utility.
pub fn ds_strategy_proof_given(f: &Scc, model: &ProbabilityModel) -> Result<Option<DsWitness>> {
    let space = f.space();
    let table = f.table();
    let perms = space.perms();
    for voter in 0..space.n() {
        for idx in 0..space.size() {
            let rank = space.digit(idx, voter);
            let ballot = Ballot::from_order_unchecked(perms.orders[rank].clone());
            let x = table[idx as usize];
            let l_sincere = model.checked_lottery(voter, idx, &ballot, x)?;
            for dev in 0..space.ballot_count() as usize {
                let y = table[space.replace(idx, voter, dev) as usize];
                if y == x {
                    continue;
                }
                let l_deviate = model.checked_lottery(voter, idx, &ballot, y)?;
                if fosd_ge(&l_sincere, &l_deviate, &ballot) {
                    continue;
                }
                let utility = exists_advantageous_utility(&l_sincere, &l_deviate, &ballot)
                    .expect("non-dominance yields a utility");
                let (extremes, ex, ey) = relevant_extremes(&ballot, x, y)?;
                return Ok(Some(DsWitness {
                    voter,
                    sincere_index: idx,
                    sincere: space.decode(idx)?,
                    deviation_ballot: Ballot::from_rank(dev as u64, space.m())?,
                    sincere_set: x,
                    deviation_set: y,
                    model: *model,
                    eu_sincere: expected_utility(&l_sincere, &utility)?,
                    eu_deviate: expected_utility(&l_deviate, &utility)?,
                    utility,
                    extremes,
                    epsilon: l_sincere.prob(ex),
                    delta: l_deviate.prob(ey),
                }));
            }
        }
    }
    Ok(None)
}

/// Turns a Taylor manipulation into an expected-utility witness for `model`
/// using the optimist or pessimist construction.
pub fn witness_from_manipulation(
    f: &Scc,
    tm: &TaylorManipulation,
    model: &ProbabilityModel,
) -> Result<DsWitness> {
    let ballot = tm.sincere_ballot();
    let idx = f.space().index(&tm.sincere)?;
    let (x, y) = (tm.sincere_set, tm.deviation_set);
    let l_sincere = model.checked_lottery(tm.voter, idx, ballot, x)?;
    let l_deviate = model.checked_lottery(tm.voter, idx, ballot, y)?;
    let (ex, ey) = match tm.mode {
        Mode::Optimist => (best(ballot, x)?, best(ballot, y)?),
        Mode::Pessimist => (worst(ballot, x)?, worst(ballot, y)?),
    };
    let (epsilon, delta) = (l_sincere.prob(ex), l_deviate.prob(ey));
    let utility = match tm.mode {
        Mode::Optimist => optimist_witness(&epsilon, &delta, ballot, x, y)?,
        Mode::Pessimist => pessimist_witness(&epsilon, &delta, ballot, x, y)?,
    };
    let eu_sincere = expected_utility(&l_sincere, &utility)?;
    let eu_deviate = expected_utility(&l_deviate, &utility)?;
    if eu_deviate <= eu_sincere {
        return Err(Error::domain(format!(
            "constructed utility does not separate: {eu_deviate} <= {eu_sincere}"
        )));
    }
    Ok(DsWitness {
        voter: tm.voter,
        sincere_index: idx,
        sincere: tm.sincere.clone(),
        deviation_ballot: tm.deviation_ballot.clone(),
        sincere_set: x,
        deviation_set: y,
        model: *model,
        utility,
        eu_sincere,
        eu_deviate,
        extremes: Some(tm.mode),
        epsilon,
        delta,
    })
}
