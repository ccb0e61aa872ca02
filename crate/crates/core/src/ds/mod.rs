//! Lotteries over outcome sets, probability models, consistent utilities and
//! expected-utility manipulation witnesses.

mod fosd;
mod lottery;
mod model;
mod utility;
mod witness;

pub use fosd::{exists_advantageous_utility, fosd_ge};
pub use lottery::Lottery;
pub use model::{lottery_of, ProbabilityModel};
pub(crate) use model::mix;
pub use utility::{expected_utility, UtilityFunction};
pub use witness::{
    ds_strategy_proof_given, optimist_witness, pessimist_pivot_value, pessimist_top_value,
    pessimist_witness, witness_from_manipulation, DsWitness,
};

/// Exact rational used on every decision path.
pub type Rational = num_rational::BigRational;

/// `"num/den"`, always with an explicit denominator.
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let (n, d) = (n.trim().parse().ok()?, d.trim().parse::<num_bigint::BigInt>().ok()?);
    if d == 0.into() {
        return None;
    }
    Some(Rational::new(n, d))
}
