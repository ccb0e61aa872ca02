//! Lexicographic (Lehmer code) ranking of permutations and per-size lookup
//! tables shared by every scan.

use std::sync::OnceLock;

use crate::MAX_ALTERNATIVES;

pub fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Lexicographic rank of a permutation of `0..perm.len()`.
///
/// Rank 0 is the identity. The caller guarantees `perm` is a permutation.
pub fn rank(perm: &[u8]) -> u64 {
    let m = perm.len();
    let mut seen: u32 = 0;
    let mut idx = 0u64;
    for (i, &x) in perm.iter().enumerate() {
        // digits below x not yet used
        let smaller_used = (seen & ((1u32 << x) - 1)).count_ones() as u64;
        let lehmer = x as u64 - smaller_used;
        idx += lehmer * factorial(m - 1 - i);
        seen |= 1 << x;
    }
    idx
}

/// Inverse of [`rank`]. Requires `idx < m!`.
pub fn unrank(mut idx: u64, m: usize) -> Vec<u8> {
    let mut pool: Vec<u8> = (0..m as u8).collect();
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let f = factorial(m - 1 - i);
        let d = (idx / f) as usize;
        idx %= f;
        out.push(pool.remove(d));
    }
    out
}

/// Precomputed data for all `m!` ballots over `m` alternatives.
///
/// `best_pos[r << m | mask]` is the ballot position (0 = top) of the best
/// member of `mask` under ballot rank `r`; `worst_pos` likewise.
#[derive(Debug)]
pub struct PermTable {
    pub m: usize,
    pub orders: Vec<Vec<u8>>,
    /// `positions[r][a]` is the position of alternative `a` on ballot `r`.
    pub positions: Vec<Vec<u8>>,
    pub best_pos: Vec<u8>,
    pub worst_pos: Vec<u8>,
}

impl PermTable {
    fn build(m: usize) -> Self {
        let count = factorial(m) as usize;
        let masks = 1usize << m;
        let orders: Vec<Vec<u8>> = (0..count as u64).map(|r| unrank(r, m)).collect();
        let positions: Vec<Vec<u8>> = orders
            .iter()
            .map(|o| {
                let mut pos = vec![0u8; m];
                for (p, &a) in o.iter().enumerate() {
                    pos[a as usize] = p as u8;
                }
                pos
            })
            .collect();
        let mut best_pos = vec![u8::MAX; count * masks];
        let mut worst_pos = vec![u8::MAX; count * masks];
        for (r, order) in orders.iter().enumerate() {
            for mask in 1..masks {
                let mut best = u8::MAX;
                let mut worst = 0u8;
                for (p, &a) in order.iter().enumerate() {
                    if mask >> a & 1 == 1 {
                        best = best.min(p as u8);
                        worst = worst.max(p as u8);
                    }
                }
                best_pos[r * masks + mask] = best;
                worst_pos[r * masks + mask] = worst;
            }
        }
        PermTable {
            m,
            orders,
            positions,
            best_pos,
            worst_pos,
        }
    }

    /// Shared table for `m` alternatives, built on first use.
    pub fn get(m: usize) -> &'static PermTable {
        static TABLES: [OnceLock<PermTable>; MAX_ALTERNATIVES + 1] =
            [const { OnceLock::new() }; MAX_ALTERNATIVES + 1];
        assert!(
            (1..=MAX_ALTERNATIVES).contains(&m),
            "alternative count {m} outside 1..={MAX_ALTERNATIVES}"
        );
        TABLES[m].get_or_init(|| PermTable::build(m))
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    #[inline]
    pub fn best_pos(&self, rank: usize, mask: u8) -> u8 {
        self.best_pos[(rank << self.m) | mask as usize]
    }

    #[inline]
    pub fn worst_pos(&self, rank: usize, mask: u8) -> u8 {
        self.worst_pos[(rank << self.m) | mask as usize]
    }

    #[inline]
    pub fn top(&self, rank: usize) -> u8 {
        self.orders[rank][0]
    }
}
