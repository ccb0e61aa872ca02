//! Social choice correspondences over finite domains: optimist/pessimist
//! strategy-proofness, expected-utility manipulability under probability
//! models, explicit manipulation witnesses, and exhaustive or sampled
//! verification that the two notions of manipulation coincide.

pub mod audit;
pub mod ballot;
pub mod ds;
pub mod error;
pub mod io;
pub mod manipulation;
pub mod outcome;
pub mod perm;
pub mod profile;
pub mod scc;
pub mod verify;

pub use ballot::{Alternative, Ballot};
pub use error::{Error, Result};
pub use manipulation::{
    check_taylor_hypotheses, find_taylor_manipulation, is_onto_singletons, weak_dictators, Mode,
    TaylorManipulation, TaylorReport,
};
pub use outcome::{best, optimist_ge, pessimist_ge, worst, OutcomeSet};
pub use profile::{profile_decode, profile_index, Profile, ProfileSpace};
pub use scc::{evaluate, Rule, Scc, SccKind};

/// Largest supported number of alternatives (outcome sets are 8-bit masks).
pub const MAX_ALTERNATIVES: usize = 8;

/// Largest supported profile space `(m!)^n`.
pub const MAX_PROFILES: u64 = 1 << 24;
