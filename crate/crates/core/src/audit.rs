//! Independent re-checks of emitted witnesses.
//!
//! These recompute everything from the correspondence's profile-level
//! evaluation and plain best/worst lookups, never from the table scans that
//! produced the witness.

use num_traits::{One, Zero};

use crate::ballot::Alternative;
use crate::ds::{lottery_of, DsWitness, Rational};
use crate::manipulation::{Mode, TaylorManipulation};
use crate::outcome::{best, worst};
use crate::scc::Scc;

pub type AuditResult = std::result::Result<(), String>;

fn fail<T>(msg: impl Into<String>) -> std::result::Result<T, String> {
    Err(msg.into())
}

pub fn audit_taylor(f: &Scc, w: &TaylorManipulation) -> AuditResult {
    let p = &w.sincere;
    if p.n() != f.n() || p.m() != f.m() || w.voter >= f.n() {
        return fail("witness dimensions do not match the correspondence");
    }
    let q = p
        .with_ballot(w.voter, w.deviation_ballot.clone())
        .map_err(|e| e.to_string())?;
    for v in (0..f.n()).filter(|&v| v != w.voter) {
        if p.ballot(v) != q.ballot(v) {
            return fail(format!("deviation changes voter {v}'s ballot"));
        }
    }
    let x = f.evaluate(p).map_err(|e| e.to_string())?;
    let y = f.evaluate(&q).map_err(|e| e.to_string())?;
    if x != w.sincere_set || y != w.deviation_set {
        return fail(format!(
            "recorded sets {} / {} but correspondence gives {x} / {y}",
            w.sincere_set, w.deviation_set
        ));
    }
    let ballot = p.ballot(w.voter);
    let pick = match w.mode {
        Mode::Optimist => best,
        Mode::Pessimist => worst,
    };
    let ex = pick(ballot, x).map_err(|e| e.to_string())?;
    let ey = pick(ballot, y).map_err(|e| e.to_string())?;
    if !(x.contains(ex) && y.contains(ey)) {
        return fail("extreme is not a member of its set");
    }
    if !ballot.prefers(ey, ex) {
        return fail(format!(
            "{:?} extreme {ey} of {y} is not preferred to {ex} of {x}",
            w.mode
        ));
    }
    Ok(())
}

pub fn audit_ds(f: &Scc, w: &DsWitness) -> AuditResult {
    let p = &w.sincere;
    if p.n() != f.n() || p.m() != f.m() || w.voter >= f.n() {
        return fail("witness dimensions do not match the correspondence");
    }
    let q = w.deviation_profile();
    let x = f.evaluate(p).map_err(|e| e.to_string())?;
    let y = f.evaluate(&q).map_err(|e| e.to_string())?;
    if x != w.sincere_set || y != w.deviation_set {
        return fail(format!(
            "recorded sets {} / {} but correspondence gives {x} / {y}",
            w.sincere_set, w.deviation_set
        ));
    }
    let ballot = p.ballot(w.voter);
    let u = &w.utility;
    if u.m() != f.m() {
        return fail("utility has the wrong number of alternatives");
    }
    for pair in ballot.as_slice().windows(2) {
        let (hi, lo) = (Alternative(pair[0]), Alternative(pair[1]));
        if u.value(hi) <= u.value(lo) {
            return fail(format!("utility not strictly decreasing at {hi} > {lo}"));
        }
    }
    // both lotteries are evaluated at the sincere profile
    let lx = lottery_of(&w.model, w.voter, p, x).map_err(|e| e.to_string())?;
    let ly = lottery_of(&w.model, w.voter, p, y).map_err(|e| e.to_string())?;
    let eu = |set: crate::OutcomeSet, l: &crate::ds::Lottery| -> std::result::Result<Rational, String> {
        let mut total = Rational::zero();
        let mut mass = Rational::zero();
        for a in set.iter() {
            let pa = l.prob(a);
            total += &pa * u.value(a);
            mass += pa;
        }
        if !mass.is_one() {
            return fail(format!("lottery over {set} has mass {mass}"));
        }
        Ok(total)
    };
    let (eu_x, eu_y) = (eu(x, &lx)?, eu(y, &ly)?);
    if eu_x != w.eu_sincere || eu_y != w.eu_deviate {
        return fail(format!(
            "recorded expected utilities {} / {} but recomputed {eu_x} / {eu_y}",
            w.eu_sincere, w.eu_deviate
        ));
    }
    if eu_y <= eu_x {
        return fail(format!("no strict gain: {eu_y} <= {eu_x}"));
    }
    let (ex, ey) = match w.extremes {
        Some(Mode::Pessimist) => (worst(ballot, x), worst(ballot, y)),
        _ => (best(ballot, x), best(ballot, y)),
    };
    let (ex, ey) = (ex.map_err(|e| e.to_string())?, ey.map_err(|e| e.to_string())?);
    let unit = |r: &Rational| *r > Rational::zero() && *r <= Rational::one();
    if !unit(&w.epsilon) || !unit(&w.delta) {
        return fail(format!("epsilon {} / delta {} outside (0, 1]", w.epsilon, w.delta));
    }
    if lx.prob(ex) != w.epsilon || ly.prob(ey) != w.delta {
        return fail("epsilon / delta do not match the model");
    }
    Ok(())
}
