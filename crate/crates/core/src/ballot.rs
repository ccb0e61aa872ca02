use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm;
use crate::MAX_ALTERNATIVES;

/// Index of an alternative in `0..m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alternative(pub u8);

impl Alternative {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A strict linear order over `0..m`, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Ballot {
    ranking: Vec<u8>,
}

impl Ballot {
    pub fn new(ranking: Vec<u8>) -> Result<Self> {
        let m = ranking.len();
        if m == 0 || m > MAX_ALTERNATIVES {
            return Err(Error::domain(format!(
                "ballot length {m} outside 1..={MAX_ALTERNATIVES}"
            )));
        }
        let mut seen = 0u32;
        for &a in &ranking {
            if a as usize >= m || seen >> a & 1 == 1 {
                return Err(Error::domain(format!(
                    "ballot {ranking:?} is not a permutation of 0..{m}"
                )));
            }
            seen |= 1 << a;
        }
        Ok(Ballot { ranking })
    }

    /// `0 > 1 > ... > m-1`
    pub fn identity(m: usize) -> Self {
        Ballot {
            ranking: (0..m as u8).collect(),
        }
    }

    pub fn from_rank(rank: u64, m: usize) -> Result<Self> {
        let size = perm::factorial(m);
        if rank >= size {
            return Err(Error::Range { index: rank, size });
        }
        Ok(Ballot {
            ranking: perm::unrank(rank, m),
        })
    }

    pub(crate) fn from_order_unchecked(ranking: Vec<u8>) -> Self {
        Ballot { ranking }
    }

    pub fn rank(&self) -> u64 {
        perm::rank(&self.ranking)
    }

    pub fn m(&self) -> usize {
        self.ranking.len()
    }

    pub fn ranking(&self) -> impl DoubleEndedIterator<Item = Alternative> + ExactSizeIterator + '_ {
        self.ranking.iter().map(|&a| Alternative(a))
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.ranking
    }

    pub fn top(&self) -> Alternative {
        Alternative(self.ranking[0])
    }

    pub fn at(&self, position: usize) -> Alternative {
        Alternative(self.ranking[position])
    }

    /// Position of `a` on this ballot, 0 being the top.
    pub fn position(&self, a: Alternative) -> usize {
        self.ranking
            .iter()
            .position(|&x| x == a.0)
            .expect("alternative out of range for ballot")
    }

    /// `a` strictly preferred to `b`.
    pub fn prefers(&self, a: Alternative, b: Alternative) -> bool {
        self.position(a) < self.position(b)
    }
}

impl TryFrom<Vec<u8>> for Ballot {
    type Error = Error;

    fn try_from(v: Vec<u8>) -> Result<Self> {
        Ballot::new(v)
    }
}

impl From<Ballot> for Vec<u8> {
    fn from(b: Ballot) -> Self {
        b.ranking
    }
}

impl fmt::Display for Ballot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.ranking.iter().enumerate() {
            if i > 0 {
                f.write_str(">")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}
