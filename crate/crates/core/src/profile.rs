use serde::{Deserialize, Serialize};

use crate::ballot::Ballot;
use crate::error::{Error, Result};
use crate::perm::{self, PermTable};
use crate::{MAX_ALTERNATIVES, MAX_PROFILES};

/// One ballot per voter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Profile {
    ballots: Vec<Ballot>,
}

impl Profile {
    pub fn new(ballots: Vec<Ballot>) -> Result<Self> {
        let Some(first) = ballots.first() else {
            return Err(Error::domain("profile needs at least one voter"));
        };
        let m = first.m();
        if ballots.iter().any(|b| b.m() != m) {
            return Err(Error::domain("ballots in a profile must share m"));
        }
        Ok(Profile { ballots })
    }

    pub fn n(&self) -> usize {
        self.ballots.len()
    }

    pub fn m(&self) -> usize {
        self.ballots[0].m()
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    pub fn ballot(&self, voter: usize) -> &Ballot {
        &self.ballots[voter]
    }

    /// The profile `P_i' P_-i`.
    pub fn with_ballot(&self, voter: usize, ballot: Ballot) -> Result<Profile> {
        if voter >= self.n() {
            return Err(Error::domain(format!("voter {voter} out of range")));
        }
        if ballot.m() != self.m() {
            return Err(Error::domain("replacement ballot has a different m"));
        }
        let mut ballots = self.ballots.clone();
        ballots[voter] = ballot;
        Ok(Profile { ballots })
    }
}

/// The canonical enumeration of all `(m!)^n` profiles.
///
/// Each ballot contributes its Lehmer rank as one mixed-radix digit, voter 0
/// being the most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProfileSpace {
    n: usize,
    m: usize,
    ballots: u64,
    size: u64,
}

impl ProfileSpace {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("need at least one voter"));
        }
        if m == 0 || m > MAX_ALTERNATIVES {
            return Err(Error::domain(format!(
                "alternative count {m} outside 1..={MAX_ALTERNATIVES}"
            )));
        }
        let ballots = perm::factorial(m);
        let size = u32::try_from(n)
            .ok()
            .and_then(|n| ballots.checked_pow(n))
            .filter(|&s| s <= MAX_PROFILES)
            .ok_or_else(|| Error::TooLarge {
                what: "profile space",
                size: format!("({ballots})^{n}"),
            })?;
        Ok(ProfileSpace {
            n,
            m,
            ballots,
            size,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of distinct ballots, `m!`.
    pub fn ballot_count(&self) -> u64 {
        self.ballots
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn perms(&self) -> &'static PermTable {
        PermTable::get(self.m)
    }

    /// Place value of voter `i`'s digit.
    #[inline]
    pub fn weight(&self, voter: usize) -> u64 {
        self.ballots.pow((self.n - 1 - voter) as u32)
    }

    #[inline]
    pub fn digit(&self, index: u64, voter: usize) -> usize {
        ((index / self.weight(voter)) % self.ballots) as usize
    }

    /// Index of the profile obtained by giving `voter` the ballot of rank `rank`.
    #[inline]
    pub fn replace(&self, index: u64, voter: usize, rank: usize) -> u64 {
        let w = self.weight(voter);
        let old = (index / w) % self.ballots;
        index - old * w + rank as u64 * w
    }

    pub fn index(&self, profile: &Profile) -> Result<u64> {
        if profile.n() != self.n || profile.m() != self.m {
            return Err(Error::domain(format!(
                "profile is {}x{}, space is {}x{}",
                profile.n(),
                profile.m(),
                self.n,
                self.m
            )));
        }
        Ok(profile
            .ballots()
            .iter()
            .fold(0u64, |acc, b| acc * self.ballots + b.rank()))
    }

    pub fn decode(&self, index: u64) -> Result<Profile> {
        if index >= self.size {
            return Err(Error::Range {
                index,
                size: self.size,
            });
        }
        let perms = self.perms();
        let ballots = (0..self.n)
            .map(|v| Ballot::from_order_unchecked(perms.orders[self.digit(index, v)].clone()))
            .collect();
        Ok(Profile { ballots })
    }
}

/// Canonical index of `p` within its own profile space.
pub fn profile_index(p: &Profile) -> Result<u64> {
    ProfileSpace::new(p.n(), p.m())?.index(p)
}

pub fn profile_decode(index: u64, n: usize, m: usize) -> Result<Profile> {
    ProfileSpace::new(n, m)?.decode(index)
}
