//! Social choice correspondences: explicit tables and built-in rules.

use std::borrow::Cow;
use std::fmt;

use crate::ballot::{Alternative, Ballot};
use crate::error::{Error, Result};
use crate::outcome::OutcomeSet;
use crate::profile::{Profile, ProfileSpace};

/// Built-in correspondences used as known-answer fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Always `{a}`.
    Constant(Alternative),
    /// `{top of voter i}`.
    Dictatorial(usize),
    /// Union of every voter's top choice.
    Omninomination,
    /// Alternatives with the most first places.
    PluralityTies,
    /// Alternatives with the highest Borda score (m-1 for first, 0 for last).
    BordaSet,
    /// Alternatives no other alternative beats on every ballot.
    ParetoSet,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Constant(_) => "constant",
            Rule::Dictatorial(_) => "dictatorial",
            Rule::Omninomination => "omninomination",
            Rule::PluralityTies => "plurality-ties",
            Rule::BordaSet => "borda-set",
            Rule::ParetoSet => "pareto-set",
        }
    }

    /// Outcome on a profile given as ballot orders. No argument checks.
    pub(crate) fn apply(&self, ballots: &[&[u8]], m: usize) -> u8 {
        match *self {
            Rule::Constant(a) => 1 << a.0,
            Rule::Dictatorial(i) => 1 << ballots[i][0],
            Rule::Omninomination => ballots.iter().fold(0, |acc, b| acc | 1 << b[0]),
            Rule::PluralityTies => {
                let mut counts = [0u32; 8];
                for b in ballots {
                    counts[b[0] as usize] += 1;
                }
                argmax_mask(&counts[..m])
            }
            Rule::BordaSet => {
                let mut scores = [0u32; 8];
                for b in ballots {
                    for (pos, &a) in b.iter().enumerate() {
                        scores[a as usize] += (m - 1 - pos) as u32;
                    }
                }
                argmax_mask(&scores[..m])
            }
            Rule::ParetoSet => {
                let mut out = 0u8;
                let pos: Vec<[u8; 8]> = ballots
                    .iter()
                    .map(|b| {
                        let mut p = [0u8; 8];
                        for (i, &a) in b.iter().enumerate() {
                            p[a as usize] = i as u8;
                        }
                        p
                    })
                    .collect();
                for a in 0..m {
                    let dominated = (0..m).any(|b| b != a && pos.iter().all(|p| p[b] < p[a]));
                    if !dominated {
                        out |= 1 << a;
                    }
                }
                out
            }
        }
    }
}

fn argmax_mask(values: &[u32]) -> u8 {
    let max = values.iter().copied().max().unwrap_or(0);
    values
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v == max)
        .fold(0u8, |acc, (a, _)| acc | 1 << a)
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Constant(a) => write!(f, "constant({a})"),
            Rule::Dictatorial(i) => write!(f, "dictatorial({i})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SccKind {
    /// One outcome per profile, indexed by canonical profile index.
    ExplicitTable(Vec<OutcomeSet>),
    Rule(Rule),
}

/// A social choice correspondence over `n` voters and `m` alternatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scc {
    space: ProfileSpace,
    kind: SccKind,
}

impl Scc {
    pub fn from_table(n: usize, m: usize, table: Vec<OutcomeSet>) -> Result<Self> {
        let space = ProfileSpace::new(n, m)?;
        if table.len() as u64 != space.size() {
            return Err(Error::domain(format!(
                "table has {} entries, profile space has {}",
                table.len(),
                space.size()
            )));
        }
        if let Some((i, w)) = table.iter().enumerate().find(|(_, w)| !w.fits(m)) {
            return Err(Error::domain(format!(
                "table entry {i} ({w}) names an alternative outside 0..{m}"
            )));
        }
        Ok(Scc {
            space,
            kind: SccKind::ExplicitTable(table),
        })
    }

    pub fn from_rule(n: usize, m: usize, rule: Rule) -> Result<Self> {
        let space = ProfileSpace::new(n, m)?;
        match rule {
            Rule::Constant(a) if a.index() >= m => {
                return Err(Error::domain(format!("constant alternative {a} >= m = {m}")))
            }
            Rule::Dictatorial(i) if i >= n => {
                return Err(Error::domain(format!("dictator {i} >= n = {n}")))
            }
            _ => {}
        }
        Ok(Scc {
            space,
            kind: SccKind::Rule(rule),
        })
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn m(&self) -> usize {
        self.space.m()
    }

    pub fn space(&self) -> &ProfileSpace {
        &self.space
    }

    pub fn kind(&self) -> &SccKind {
        &self.kind
    }

    pub fn evaluate(&self, profile: &Profile) -> Result<OutcomeSet> {
        let index = self.space.index(profile)?;
        Ok(match &self.kind {
            SccKind::ExplicitTable(t) => t[index as usize],
            SccKind::Rule(r) => {
                let orders: Vec<&[u8]> = profile.ballots().iter().map(Ballot::as_slice).collect();
                OutcomeSet::from_mask_unchecked(r.apply(&orders, self.m()))
            }
        })
    }

    /// Outcome at a canonical profile index.
    pub fn outcome_at(&self, index: u64) -> Result<OutcomeSet> {
        if index >= self.space.size() {
            return Err(Error::Range {
                index,
                size: self.space.size(),
            });
        }
        Ok(match &self.kind {
            SccKind::ExplicitTable(t) => t[index as usize],
            SccKind::Rule(r) => self.rule_outcome(*r, index),
        })
    }

    fn rule_outcome(&self, rule: Rule, index: u64) -> OutcomeSet {
        let perms = self.space.perms();
        let orders: Vec<&[u8]> = (0..self.n())
            .map(|v| perms.orders[self.space.digit(index, v)].as_slice())
            .collect();
        OutcomeSet::from_mask_unchecked(rule.apply(&orders, self.m()))
    }

    /// The full outcome table, borrowed when already explicit.
    pub fn table(&self) -> Cow<'_, [OutcomeSet]> {
        match &self.kind {
            SccKind::ExplicitTable(t) => Cow::Borrowed(t),
            SccKind::Rule(r) => Cow::Owned(
                (0..self.space.size())
                    .map(|i| self.rule_outcome(*r, i))
                    .collect(),
            ),
        }
    }

    /// The same correspondence as an explicit table.
    pub fn materialize(&self) -> Scc {
        Scc {
            space: self.space,
            kind: SccKind::ExplicitTable(self.table().into_owned()),
        }
    }
}

/// Outcome of `f` at `p`.
pub fn evaluate(f: &Scc, p: &Profile) -> Result<OutcomeSet> {
    f.evaluate(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Alternative = Alternative(0);
    const B: Alternative = Alternative(1);
    const C: Alternative = Alternative(2);

    fn profile(ballots: &[&[u8]]) -> Profile {
        Profile::new(ballots.iter().map(|b| Ballot::new(b.to_vec()).unwrap()).collect()).unwrap()
    }

    fn set(alts: &[Alternative]) -> OutcomeSet {
        OutcomeSet::from_alternatives(alts.iter().copied()).unwrap()
    }

    // Independent Borda tally: counts, for each alternative, how many
    // alternatives it beats on each ballot.
    fn borda_oracle(p: &Profile) -> OutcomeSet {
        let m = p.m();
        let scores: Vec<usize> = (0..m as u8)
            .map(|a| {
                p.ballots()
                    .iter()
                    .map(|b| {
                        (0..m as u8)
                            .filter(|&x| x != a && b.prefers(Alternative(a), Alternative(x)))
                            .count()
                    })
                    .sum()
            })
            .collect();
        let max = *scores.iter().max().unwrap();
        set(&(0..m as u8)
            .filter(|&a| scores[a as usize] == max)
            .map(Alternative)
            .collect::<Vec<_>>())
    }

    fn pareto_oracle(p: &Profile) -> OutcomeSet {
        let m = p.m() as u8;
        let undominated: Vec<Alternative> = (0..m)
            .map(Alternative)
            .filter(|&a| {
                !(0..m)
                    .map(Alternative)
                    .any(|b| b != a && p.ballots().iter().all(|bl| bl.prefers(b, a)))
            })
            .collect();
        set(&undominated)
    }

    #[test]
    fn omninomination_unions_tops() {
        let f = Scc::from_rule(2, 3, Rule::Omninomination).unwrap();
        assert_eq!(f.evaluate(&profile(&[&[0, 1, 2], &[1, 2, 0]])).unwrap(), set(&[A, B]));
    }

    #[test]
    fn borda_example() {
        let f = Scc::from_rule(2, 3, Rule::BordaSet).unwrap();
        let p = profile(&[&[0, 1, 2], &[1, 2, 0]]);
        assert_eq!(borda_oracle(&p), set(&[B]));
        assert_eq!(f.evaluate(&p).unwrap(), set(&[B]));
    }

    #[test]
    fn pareto_example() {
        let f = Scc::from_rule(2, 3, Rule::ParetoSet).unwrap();
        let p = profile(&[&[0, 1, 2], &[0, 2, 1]]);
        assert_eq!(pareto_oracle(&p), set(&[A]));
        assert_eq!(f.evaluate(&p).unwrap(), set(&[A]));
    }

    #[test]
    fn rules_match_oracles_and_are_nonempty() {
        for (n, m) in [(1, 3), (2, 3), (3, 3), (2, 4)] {
            let space = ProfileSpace::new(n, m).unwrap();
            let borda = Scc::from_rule(n, m, Rule::BordaSet).unwrap();
            let pareto = Scc::from_rule(n, m, Rule::ParetoSet).unwrap();
            let rules = [
                Rule::Constant(C),
                Rule::Dictatorial(n - 1),
                Rule::Omninomination,
                Rule::PluralityTies,
                Rule::BordaSet,
                Rule::ParetoSet,
            ];
            for idx in 0..space.size() {
                let p = space.decode(idx).unwrap();
                assert_eq!(borda.evaluate(&p).unwrap(), borda_oracle(&p));
                assert_eq!(pareto.evaluate(&p).unwrap(), pareto_oracle(&p));
                for rule in rules {
                    let f = Scc::from_rule(n, m, rule).unwrap();
                    let w = f.evaluate(&p).unwrap();
                    assert!(w.mask() != 0 && w.fits(m));
                    assert_eq!(f.outcome_at(idx).unwrap(), w);
                }
            }
        }
    }

    #[test]
    fn plurality_ties() {
        let f = Scc::from_rule(2, 3, Rule::PluralityTies).unwrap();
        assert_eq!(f.evaluate(&profile(&[&[0, 1, 2], &[1, 2, 0]])).unwrap(), set(&[A, B]));
        assert_eq!(f.evaluate(&profile(&[&[2, 1, 0], &[2, 0, 1]])).unwrap(), set(&[C]));
    }

    #[test]
    fn materialized_table_agrees() {
        let f = Scc::from_rule(2, 3, Rule::BordaSet).unwrap();
        let t = f.materialize();
        assert!(matches!(t.kind(), SccKind::ExplicitTable(v) if v.len() == 36));
        for idx in 0..36 {
            assert_eq!(t.outcome_at(idx).unwrap(), f.outcome_at(idx).unwrap());
        }
    }

    #[test]
    fn construction_errors() {
        assert!(Scc::from_rule(2, 3, Rule::Dictatorial(2)).is_err());
        assert!(Scc::from_rule(2, 3, Rule::Constant(Alternative(3))).is_err());
        assert!(Scc::from_table(1, 3, vec![OutcomeSet::full(3); 5]).is_err());
        assert!(Scc::from_table(1, 2, vec![OutcomeSet::full(3); 2]).is_err());
        let f = Scc::from_rule(2, 3, Rule::Omninomination).unwrap();
        assert!(f.evaluate(&profile(&[&[0, 1, 2]])).is_err());
    }
}
