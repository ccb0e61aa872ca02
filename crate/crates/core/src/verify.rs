//! Exhaustive and sampled verification over spaces of correspondences.
//!
//! Every correspondence in a run is addressed by a stream index: in
//! exhaustive mode the base-(2^m - 1) counter value of its table, in sample
//! mode the fixtures first and then the seeded samples. Work is split into
//! contiguous index ranges and merged in range order, so reports do not
//! depend on the number of workers.

use std::fmt;
use std::thread;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::audit::{audit_ds, audit_taylor};
use crate::ballot::Alternative;
use crate::ds::{ds_strategy_proof_given, mix, witness_from_manipulation, DsWitness, ProbabilityModel};
use crate::error::{Error, Result};
use crate::io::table_code;
use crate::manipulation::{
    build_manipulation, scan_taylor, singleton_witnesses, weak_dictators_of, Mode, TaylorManipulation,
};
use crate::outcome::OutcomeSet;
use crate::profile::ProfileSpace;
use crate::scc::{Rule, Scc};

/// Largest correspondence space `enumerate_sccs` will walk.
pub const MAX_ENUMERATION: u64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bias {
    /// Every profile slot uniform over the `2^m - 1` nonempty sets.
    Uniform,
    /// A fixture's table (cycling through [`fixtures`]) with this many
    /// slots replaced by a different random nonempty set.
    MutateFixture(usize),
}

impl fmt::Display for Bias {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bias::Uniform => f.write_str("uniform"),
            Bias::MutateFixture(k) => write!(f, "mutate:{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    Exhaustive,
    Sample { count: u64, seed: u64, bias: Bias },
}

/// Size of the space of all tables, `(2^m - 1)^((m!)^n)`.
pub fn scc_space_size(n: usize, m: usize) -> Result<BigUint> {
    let space = ProfileSpace::new(n, m)?;
    let base = BigUint::from((1u32 << m) - 1);
    Ok(base.pow(space.size() as u32))
}

fn exhaustive_count(n: usize, m: usize) -> Result<u64> {
    let size = scc_space_size(n, m)?;
    match u64::try_from(&size) {
        Ok(s) if s <= MAX_ENUMERATION => Ok(s),
        _ => Err(Error::TooLarge {
            what: "correspondence space",
            size: format!("{size} (limit {MAX_ENUMERATION})"),
        }),
    }
}

/// The table at position `index` of the base-(2^m - 1) counter, slot 0 most significant.
pub fn table_from_counter(space: &ProfileSpace, mut index: u64) -> Scc {
    let base = (1u64 << space.m()) - 1;
    let len = space.size() as usize;
    let mut table = vec![OutcomeSet::from_mask_unchecked(1); len];
    for slot in table.iter_mut().rev() {
        *slot = OutcomeSet::from_mask_unchecked((index % base + 1) as u8);
        index /= base;
    }
    Scc::from_table(space.n(), space.m(), table).expect("counter table is well formed")
}

/// Every explicit table over `n` voters and `m` alternatives, in counter order.
pub fn enumerate_sccs(n: usize, m: usize) -> Result<impl Iterator<Item = Scc>> {
    let count = exhaustive_count(n, m)?;
    let space = ProfileSpace::new(n, m)?;
    Ok((0..count).map(move |i| table_from_counter(&space, i)))
}

/// Built-in rules prepended to every sampled run: each dictatorship,
/// omninomination, constant, plurality, Borda and Pareto.
pub fn fixtures(n: usize, m: usize) -> Vec<(String, Scc)> {
    let mut rules: Vec<Rule> = (0..n).map(Rule::Dictatorial).collect();
    rules.extend([
        Rule::Omninomination,
        Rule::Constant(Alternative(0)),
        Rule::PluralityTies,
        Rule::BordaSet,
        Rule::ParetoSet,
    ]);
    rules
        .into_iter()
        .map(|r| (r.to_string(), Scc::from_rule(n, m, r).expect("fixture rule valid").materialize()))
        .collect()
}

fn sample_one(space: &ProfileSpace, seed: u64, bias: Bias, j: u64, fixtures: &[(String, Scc)]) -> Scc {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(&[seed, j]));
    let base = (1u16 << space.m()) - 1;
    let len = space.size() as usize;
    match bias {
        Bias::Uniform => {
            let table = (0..len)
                .map(|_| OutcomeSet::from_mask_unchecked(rng.gen_range(1..=base) as u8))
                .collect();
            Scc::from_table(space.n(), space.m(), table).expect("sampled table is well formed")
        }
        Bias::MutateFixture(k) => {
            let (_, fixture) = &fixtures[(j % fixtures.len() as u64) as usize];
            let mut table = fixture.table().into_owned();
            if base > 1 {
                for _ in 0..k {
                    let slot = rng.gen_range(0..len);
                    let current = table[slot].mask() as u16;
                    let mut pick = rng.gen_range(1..base);
                    if pick >= current {
                        pick += 1;
                    }
                    table[slot] = OutcomeSet::from_mask_unchecked(pick as u8);
                }
            }
            Scc::from_table(space.n(), space.m(), table).expect("mutated table is well formed")
        }
    }
}

/// Deterministic seeded stream of `count` tables.
pub fn sample_sccs(
    n: usize,
    m: usize,
    count: u64,
    seed: u64,
    bias: Bias,
) -> Result<impl Iterator<Item = Scc>> {
    let space = ProfileSpace::new(n, m)?;
    let fixtures = fixtures(n, m);
    Ok((0..count).map(move |j| sample_one(&space, seed, bias, j, &fixtures)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Class {
    NotOnto,
    TaylorManipulable,
    StrategyProofWithDictator,
    /// Onto and strategy-proof with no weak dictator; only possible for `m < 3`.
    StrategyProofWithoutDictator,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub not_onto: u64,
    pub taylor_manipulable: u64,
    pub strategy_proof_with_dictator: u64,
    pub strategy_proof_without_dictator: u64,
}

impl Histogram {
    fn add(&mut self, class: Class) {
        match class {
            Class::NotOnto => self.not_onto += 1,
            Class::TaylorManipulable => self.taylor_manipulable += 1,
            Class::StrategyProofWithDictator => self.strategy_proof_with_dictator += 1,
            Class::StrategyProofWithoutDictator => self.strategy_proof_without_dictator += 1,
        }
    }

    fn merge(&mut self, other: &Histogram) {
        self.not_onto += other.not_onto;
        self.taylor_manipulable += other.taylor_manipulable;
        self.strategy_proof_with_dictator += other.strategy_proof_with_dictator;
        self.strategy_proof_without_dictator += other.strategy_proof_without_dictator;
    }

    pub fn total(&self) -> u64 {
        self.not_onto + self.taylor_manipulable + self.strategy_proof_with_dictator + self.strategy_proof_without_dictator
    }
}

/// A discrepancy, replayable from its table code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: u64,
    pub code: String,
    pub reason: String,
}

/// What a sampled run found for one fixture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureRecord {
    pub name: String,
    pub code: String,
    pub class: Class,
    pub spo: bool,
    pub spp: bool,
    pub onto: bool,
    pub weak_dictators: Vec<usize>,
    pub taylor_witness: Option<TaylorManipulation>,
    pub ds_half_witness: Option<DsWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScopeReport {
    pub n: usize,
    pub m: usize,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bias: Option<String>,
    pub fixtures: u64,
    pub model_count: usize,
    pub model_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    /// `"taylor"` or `"equivalence"`.
    pub check: &'static str,
    pub scope: ScopeReport,
    pub checked: u64,
    pub taylor_violations: Vec<Violation>,
    pub equivalence_violations: Vec<Violation>,
    pub forward_violations: Vec<Violation>,
    pub witness_failures: Vec<Violation>,
    pub witnesses_checked: u64,
    pub histogram: Histogram,
    pub fixture_results: Vec<FixtureRecord>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.taylor_violations.is_empty()
            && self.equivalence_violations.is_empty()
            && self.forward_violations.is_empty()
            && self.witness_failures.is_empty()
    }

    /// Copy with the timing field zeroed, for comparisons.
    pub fn without_timing(&self) -> Self {
        VerificationReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Check {
    Taylor,
    Equivalence,
}

/// A verification run over one correspondence space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub n: usize,
    pub m: usize,
    pub scope: Scope,
    pub jobs: usize,
    /// Seeded random models checked for each manipulable correspondence.
    pub model_count: usize,
    pub model_seed: u64,
}

impl Verification {
    pub fn new(n: usize, m: usize, scope: Scope) -> Self {
        Verification {
            n,
            m,
            scope,
            jobs: 1,
            model_count: 0,
            model_seed: 0,
        }
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn models(mut self, count: usize, seed: u64) -> Self {
        self.model_count = count;
        self.model_seed = seed;
        self
    }

    /// Onto, optimist- and pessimist-strategy-proof correspondences with at
    /// least three alternatives must have a weak dictator.
    pub fn run_taylor(&self) -> Result<VerificationReport> {
        if self.m < 3 {
            return Err(Error::domain("the weak-dictator check needs at least 3 alternatives"));
        }
        self.run(Check::Taylor)
    }

    /// Taylor manipulability must coincide with expected-utility
    /// manipulability under the half-half model, and every Taylor
    /// manipulation must carry over to each seeded random model.
    pub fn run_equivalence(&self) -> Result<VerificationReport> {
        if self.m < 2 {
            return Err(Error::domain("the equivalence check needs at least 2 alternatives"));
        }
        self.run(Check::Equivalence)
    }

    fn random_models(&self) -> Vec<ProbabilityModel> {
        (0..self.model_count as u64)
            .map(|k| ProbabilityModel::SeededRandom {
                seed: mix(&[self.model_seed, k]),
            })
            .collect()
    }

    fn run(&self, check: Check) -> Result<VerificationReport> {
        let start = Instant::now();
        let space = ProfileSpace::new(self.n, self.m)?;
        let fixtures = fixtures(self.n, self.m);
        let (total, scope) = match self.scope {
            Scope::Exhaustive => (
                exhaustive_count(self.n, self.m)?,
                ScopeReport {
                    n: self.n,
                    m: self.m,
                    mode: "exhaustive",
                    count: None,
                    seed: None,
                    bias: None,
                    fixtures: 0,
                    model_count: self.model_count,
                    model_seed: self.model_seed,
                },
            ),
            Scope::Sample { count, seed, bias } => (
                fixtures.len() as u64 + count,
                ScopeReport {
                    n: self.n,
                    m: self.m,
                    mode: "sample",
                    count: Some(count),
                    seed: Some(seed),
                    bias: Some(bias.to_string()),
                    fixtures: fixtures.len() as u64,
                    model_count: self.model_count,
                    model_seed: self.model_seed,
                },
            ),
        };
        let models = self.random_models();
        let ctx = Context {
            space,
            scope: self.scope,
            check,
            fixtures: &fixtures,
            models: &models,
        };

        let jobs = (self.jobs as u64).clamp(1, total.max(1));
        let chunk = total.div_ceil(jobs);
        let ranges: Vec<(u64, u64)> = (0..jobs)
            .map(|j| (j * chunk, ((j + 1) * chunk).min(total)))
            .filter(|(lo, hi)| lo < hi)
            .collect();
        let partials: Vec<Partial> = if ranges.len() <= 1 {
            ranges.iter().map(|&(lo, hi)| ctx.run_range(lo, hi)).collect()
        } else {
            thread::scope(|s| {
                let handles: Vec<_> = ranges
                    .iter()
                    .map(|&(lo, hi)| {
                        let ctx = &ctx;
                        s.spawn(move || ctx.run_range(lo, hi))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
            })
        };

        let mut report = VerificationReport {
            check: match check {
                Check::Taylor => "taylor",
                Check::Equivalence => "equivalence",
            },
            scope,
            checked: 0,
            taylor_violations: vec![],
            equivalence_violations: vec![],
            forward_violations: vec![],
            witness_failures: vec![],
            witnesses_checked: 0,
            histogram: Histogram::default(),
            fixture_results: vec![],
            elapsed_ms: 0,
        };
        for p in partials {
            report.checked += p.checked;
            report.taylor_violations.extend(p.taylor_violations);
            report.equivalence_violations.extend(p.equivalence_violations);
            report.forward_violations.extend(p.forward_violations);
            report.witness_failures.extend(p.witness_failures);
            report.witnesses_checked += p.witnesses_checked;
            report.histogram.merge(&p.histogram);
            report.fixture_results.extend(p.fixture_results);
        }
        report.elapsed_ms = start.elapsed().as_millis() as u64;
        Ok(report)
    }
}

#[derive(Default)]
struct Partial {
    checked: u64,
    taylor_violations: Vec<Violation>,
    equivalence_violations: Vec<Violation>,
    forward_violations: Vec<Violation>,
    witness_failures: Vec<Violation>,
    witnesses_checked: u64,
    histogram: Histogram,
    fixture_results: Vec<FixtureRecord>,
}

struct Context<'a> {
    space: ProfileSpace,
    scope: Scope,
    check: Check,
    fixtures: &'a [(String, Scc)],
    models: &'a [ProbabilityModel],
}

impl Context<'_> {
    fn item(&self, index: u64) -> Scc {
        match self.scope {
            Scope::Exhaustive => table_from_counter(&self.space, index),
            Scope::Sample { seed, bias, .. } => {
                let nf = self.fixtures.len() as u64;
                if index < nf {
                    self.fixtures[index as usize].1.clone()
                } else {
                    sample_one(&self.space, seed, bias, index - nf, self.fixtures)
                }
            }
        }
    }

    fn run_range(&self, lo: u64, hi: u64) -> Partial {
        let mut out = Partial::default();
        for index in lo..hi {
            let f = self.item(index);
            self.check_one(index, &f, &mut out);
        }
        out
    }

    fn check_one(&self, index: u64, f: &Scc, out: &mut Partial) {
        let space = &self.space;
        let table = f.table();
        let mut code: Option<String> = None;
        let mut violation = |reason: String| Violation {
            index,
            code: code.get_or_insert_with(|| table_code(f)).clone(),
            reason,
        };

        let manipulations: Vec<TaylorManipulation> = [Mode::Optimist, Mode::Pessimist]
            .into_iter()
            .filter_map(|mode| scan_taylor(space, &table, mode).map(|hit| build_manipulation(f, &table, mode, hit)))
            .collect();
        let (spo, spp) = (
            !manipulations.iter().any(|t| t.mode == Mode::Optimist),
            !manipulations.iter().any(|t| t.mode == Mode::Pessimist),
        );
        let onto = singleton_witnesses(space.m(), &table).iter().all(Option::is_some);
        let dictators = weak_dictators_of(space, &table);
        let manipulable = !manipulations.is_empty();
        let class = if !onto {
            Class::NotOnto
        } else if manipulable {
            Class::TaylorManipulable
        } else if dictators.is_empty() {
            Class::StrategyProofWithoutDictator
        } else {
            Class::StrategyProofWithDictator
        };
        out.checked += 1;
        out.histogram.add(class);

        for tm in &manipulations {
            out.witnesses_checked += 1;
            if let Err(why) = audit_taylor(f, tm) {
                out.witness_failures.push(violation(format!("{:?} witness: {why}", tm.mode)));
            }
        }
        if class == Class::StrategyProofWithoutDictator && space.m() >= 3 {
            out.taylor_violations
                .push(violation("onto, SPO and SPP but no weak dictator".into()));
        }

        let mut half_witness = None;
        if self.check == Check::Equivalence {
            match ds_strategy_proof_given(f, &ProbabilityModel::HalfHalf) {
                Err(e) => out.equivalence_violations.push(violation(format!("half-half model: {e}"))),
                Ok(w) => {
                    if let Some(w) = &w {
                        out.witnesses_checked += 1;
                        if let Err(why) = audit_ds(f, w) {
                            out.witness_failures.push(violation(format!("half-half witness: {why}")));
                        }
                    }
                    if manipulable != w.is_some() {
                        out.equivalence_violations.push(violation(format!(
                            "Taylor-manipulable = {manipulable}, half-half witness = {}",
                            w.is_some()
                        )));
                    }
                    half_witness = w;
                }
            }
            if manipulable {
                for model in self.models {
                    self.forward(f, model, &manipulations, out, &mut violation);
                }
            }
        }

        if let Scope::Sample { .. } = self.scope {
            if index < self.fixtures.len() as u64 {
                out.fixture_results.push(FixtureRecord {
                    name: self.fixtures[index as usize].0.clone(),
                    code: table_code(f),
                    class,
                    spo,
                    spp,
                    onto,
                    weak_dictators: dictators,
                    taylor_witness: manipulations.into_iter().next(),
                    ds_half_witness: half_witness,
                });
            }
        }
    }

    /// Both routes from a Taylor manipulation to an expected-utility
    /// witness under `model`: the generic search and the explicit construction.
    fn forward(
        &self,
        f: &Scc,
        model: &ProbabilityModel,
        manipulations: &[TaylorManipulation],
        out: &mut Partial,
        violation: &mut impl FnMut(String) -> Violation,
    ) {
        let name = model.name();
        match ds_strategy_proof_given(f, model) {
            Ok(Some(w)) => {
                out.witnesses_checked += 1;
                if let Err(why) = audit_ds(f, &w) {
                    out.witness_failures.push(violation(format!("{name} witness: {why}")));
                }
            }
            Ok(None) => out
                .forward_violations
                .push(violation(format!("no expected-utility witness under {name}"))),
            Err(e) => out.forward_violations.push(violation(format!("{name}: {e}"))),
        }
        for tm in manipulations {
            match witness_from_manipulation(f, tm, model) {
                Ok(w) => {
                    out.witnesses_checked += 1;
                    if let Err(why) = audit_ds(f, &w) {
                        out.witness_failures
                            .push(violation(format!("{name} {:?} construction: {why}", tm.mode)));
                    }
                }
                Err(e) => out
                    .forward_violations
                    .push(violation(format!("{name} {:?} construction: {e}", tm.mode))),
            }
        }
    }
}

pub fn verify_taylor(n: usize, m: usize, scope: Scope) -> Result<VerificationReport> {
    Verification::new(n, m, scope).run_taylor()
}

pub fn verify_equivalence(
    n: usize,
    m: usize,
    scope: Scope,
    model_count: usize,
    seed: u64,
) -> Result<VerificationReport> {
    Verification::new(n, m, scope).models(model_count, seed).run_equivalence()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_sccs(1, 3).unwrap().count(), 117_649);
        assert_eq!(enumerate_sccs(1, 2).unwrap().count(), 9);
        let err = enumerate_sccs(2, 3).err().unwrap();
        assert!(matches!(&err, Error::TooLarge { size, .. } if size.starts_with("2651730845859653471779023381601")));
    }

    #[test]
    fn enumeration_is_distinct_and_ordered() {
        let codes: Vec<String> = enumerate_sccs(1, 2).unwrap().map(|f| table_code(&f)).collect();
        assert_eq!(codes[0], "1x2:0.0");
        assert_eq!(codes[1], "1x2:0.1");
        assert_eq!(codes[3], "1x2:1.0");
        let mut dedup = codes.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 9);
    }

    #[test]
    fn samples_are_deterministic() {
        let a: Vec<_> = sample_sccs(2, 3, 10, 42, Bias::Uniform).unwrap().collect();
        let b: Vec<_> = sample_sccs(2, 3, 10, 42, Bias::Uniform).unwrap().collect();
        assert_eq!(a, b);
        let c: Vec<_> = sample_sccs(2, 3, 10, 43, Bias::Uniform).unwrap().collect();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_mutations_reproduce_the_fixture() {
        let first = sample_sccs(2, 3, 1, 9, Bias::MutateFixture(0)).unwrap().next().unwrap();
        let dict = Scc::from_rule(2, 3, Rule::Dictatorial(0)).unwrap().materialize();
        assert_eq!(first, dict);
        let mutated = sample_sccs(2, 3, 1, 9, Bias::MutateFixture(3)).unwrap().next().unwrap();
        let diff = mutated.table().iter().zip(dict.table().iter()).filter(|(a, b)| a != b).count();
        assert!((1..=3).contains(&diff));
    }

    #[test]
    fn small_equivalence_run_is_clean() {
        let report = verify_equivalence(1, 2, Scope::Exhaustive, 2, 5).unwrap();
        assert_eq!(report.checked, 9);
        assert!(report.is_clean(), "{report:?}");
        assert_eq!(report.histogram.total(), 9);
    }

    #[test]
    fn taylor_needs_three_alternatives() {
        assert!(verify_taylor(1, 2, Scope::Exhaustive).is_err());
    }

    #[test]
    fn fixtures_are_recorded() {
        let scope = Scope::Sample { count: 5, seed: 1, bias: Bias::Uniform };
        let report = Verification::new(2, 3, scope).models(1, 0).run_equivalence().unwrap();
        assert_eq!(report.checked, 7 + 5);
        assert_eq!(report.fixture_results.len(), 7);
        assert_eq!(report.fixture_results[0].name, "dictatorial(0)");
        assert_eq!(report.fixture_results[0].class, Class::StrategyProofWithDictator);
        assert!(report.is_clean());
    }
}
