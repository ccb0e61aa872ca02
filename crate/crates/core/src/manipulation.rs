//! Optimist/pessimist strategy-proofness, onto-singletons and weak dictators.

use serde::Serialize;

use crate::ballot::{Alternative, Ballot};
use crate::outcome::OutcomeSet;
use crate::profile::{Profile, ProfileSpace};
use crate::scc::Scc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Optimist,
    Pessimist,
}

/// A voter who, by reporting `deviation_ballot` instead of their sincere
/// ballot, moves the outcome from `sincere_set` to a `deviation_set` whose
/// best (optimist) or worst (pessimist) member they strictly prefer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaylorManipulation {
    pub voter: usize,
    pub sincere_index: u64,
    pub sincere: Profile,
    pub deviation_ballot: Ballot,
    pub sincere_set: OutcomeSet,
    pub deviation_set: OutcomeSet,
    pub mode: Mode,
}

impl TaylorManipulation {
    pub fn deviation_profile(&self) -> Profile {
        self.sincere
            .with_ballot(self.voter, self.deviation_ballot.clone())
            .expect("deviation ballot matches profile")
    }

    pub fn sincere_ballot(&self) -> &Ballot {
        self.sincere.ballot(self.voter)
    }
}

/// Position of the relevant extreme of `mask` on ballot `rank`.
#[inline]
fn extreme(space: &ProfileSpace, mode: Mode, rank: usize, mask: u8) -> u8 {
    match mode {
        Mode::Optimist => space.perms().best_pos(rank, mask),
        Mode::Pessimist => space.perms().worst_pos(rank, mask),
    }
}

/// First violation in canonical order (voter, sincere index, deviation rank).
pub(crate) fn scan_taylor(
    space: &ProfileSpace,
    table: &[OutcomeSet],
    mode: Mode,
) -> Option<(usize, u64, usize)> {
    let ballots = space.ballot_count() as usize;
    for voter in 0..space.n() {
        let w = space.weight(voter);
        for idx in 0..space.size() {
            let rank = space.digit(idx, voter);
            let sincere = extreme(space, mode, rank, table[idx as usize].mask());
            if sincere == 0 {
                continue;
            }
            let base = idx - rank as u64 * w;
            for dev in 0..ballots {
                let y = table[(base + dev as u64 * w) as usize].mask();
                if extreme(space, mode, rank, y) < sincere {
                    return Some((voter, idx, dev));
                }
            }
        }
    }
    None
}

pub(crate) fn build_manipulation(
    f: &Scc,
    table: &[OutcomeSet],
    mode: Mode,
    (voter, idx, dev): (usize, u64, usize),
) -> TaylorManipulation {
    let space = f.space();
    let sincere = space.decode(idx).expect("scan index in range");
    let deviation_ballot = Ballot::from_rank(dev as u64, space.m()).expect("rank in range");
    TaylorManipulation {
        voter,
        sincere_index: idx,
        sincere,
        deviation_ballot,
        sincere_set: table[idx as usize],
        deviation_set: table[space.replace(idx, voter, dev) as usize],
        mode,
    }
}

/// First manipulation of `f` in the given mode, or `None` when `f` is
/// strategy-proof for optimists (resp. pessimists).
pub fn find_taylor_manipulation(f: &Scc, mode: Mode) -> Option<TaylorManipulation> {
    let table = f.table();
    scan_taylor(f.space(), &table, mode).map(|hit| build_manipulation(f, &table, mode, hit))
}

/// Per alternative, the first profile index whose outcome is exactly that singleton.
pub(crate) fn singleton_witnesses(m: usize, table: &[OutcomeSet]) -> Vec<Option<u64>> {
    let mut found = vec![None; m];
    let mut missing = m;
    for (idx, w) in table.iter().enumerate() {
        if w.is_singleton() {
            let a = w.mask().trailing_zeros() as usize;
            if found[a].is_none() {
                found[a] = Some(idx as u64);
                missing -= 1;
                if missing == 0 {
                    break;
                }
            }
        }
    }
    found
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OntoReport {
    pub onto: bool,
    /// Indexed by alternative.
    pub witnesses: Vec<Option<u64>>,
}

pub fn is_onto_singletons(f: &Scc) -> OntoReport {
    let witnesses = singleton_witnesses(f.m(), &f.table());
    OntoReport {
        onto: witnesses.iter().all(Option::is_some),
        witnesses,
    }
}

pub(crate) fn weak_dictators_of(space: &ProfileSpace, table: &[OutcomeSet]) -> Vec<usize> {
    let perms = space.perms();
    (0..space.n())
        .filter(|&voter| {
            (0..space.size()).all(|idx| {
                let top = perms.top(space.digit(idx, voter));
                table[idx as usize].contains(Alternative(top))
            })
        })
        .collect()
}

/// Voters whose first choice is in the outcome at every profile, ascending.
pub fn weak_dictators(f: &Scc) -> Vec<usize> {
    weak_dictators_of(f.space(), &f.table())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaylorReport {
    pub m: usize,
    pub spo: bool,
    pub spp: bool,
    pub onto: bool,
    pub weak_dictators: Vec<usize>,
    /// Strategy-proof, onto, `m >= 3` and no weak dictator.
    pub theorem_violation: bool,
    pub optimist_manipulation: Option<TaylorManipulation>,
    pub pessimist_manipulation: Option<TaylorManipulation>,
    pub singleton_witnesses: Vec<Option<u64>>,
}

pub fn check_taylor_hypotheses(f: &Scc) -> TaylorReport {
    let table = f.table();
    let space = f.space();
    let opt = scan_taylor(space, &table, Mode::Optimist)
        .map(|hit| build_manipulation(f, &table, Mode::Optimist, hit));
    let pes = scan_taylor(space, &table, Mode::Pessimist)
        .map(|hit| build_manipulation(f, &table, Mode::Pessimist, hit));
    let singleton_witnesses = singleton_witnesses(f.m(), &table);
    let onto = singleton_witnesses.iter().all(Option::is_some);
    let weak_dictators = weak_dictators_of(space, &table);
    let (spo, spp) = (opt.is_none(), pes.is_none());
    TaylorReport {
        m: f.m(),
        spo,
        spp,
        onto,
        theorem_violation: spo && spp && onto && weak_dictators.is_empty() && f.m() >= 3,
        weak_dictators,
        optimist_manipulation: opt,
        pessimist_manipulation: pes,
        singleton_witnesses,
    }
}
