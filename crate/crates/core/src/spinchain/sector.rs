use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest ring the sector enumeration accepts. Configurations are stored as
/// `u32` bit strings.
pub const MAX_SITES: usize = 26;

/// Fixed-magnetization sector of an N-site ring.
///
/// Site `i` (1-based) is bit `i - 1`; a set bit is an up spin. States are
/// sorted ascending, which for a fixed popcount is colexicographic order, so
/// the ordinal of a configuration is its combinatorial rank.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBasis {
    n_sites: usize,
    n_up: usize,
    states: Vec<u32>,
    binom: Vec<Vec<u64>>,
}

impl SectorBasis {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u32] {
        &self.states
    }

    pub fn state(&self, index: usize) -> u32 {
        self.states[index]
    }

    /// Ordinal of `config` in the sector, or `None` if it lies outside.
    #[inline]
    pub fn index_of(&self, config: u32) -> Option<usize> {
        if (config as u64) >> self.n_sites != 0 || config.count_ones() as usize != self.n_up {
            return None;
        }
        let mut rank = 0u64;
        let mut bits = config;
        let mut k = 1;
        while bits != 0 {
            let pos = bits.trailing_zeros() as usize;
            rank += self.binom[pos][k];
            k += 1;
            bits &= bits - 1;
        }
        Some(rank as usize)
    }
}

/// `C(n, k)` table for `n, k ≤ size`.
fn pascal(size: usize) -> Vec<Vec<u64>> {
    let mut t = alloc::vec![alloc::vec![0u64; size + 1]; size + 1];
    for n in 0..=size {
        t[n][0] = 1;
        for k in 1..=n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
        }
    }
    t
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    pascal(n)[n][k]
}

/// Enumerates all configurations of `n_sites` spins with `n_up` up spins.
pub fn build_sector(n_sites: usize, n_up: usize) -> Result<SectorBasis> {
    if n_sites < 4 || !n_sites.is_multiple_of(2) || n_sites > MAX_SITES {
        return Err(Error::UnsupportedSize(n_sites));
    }
    if n_up > n_sites {
        return Err(Error::InvalidFilling { n_sites, n_up });
    }
    let binom = pascal(n_sites);
    let dim = binom[n_sites][n_up] as usize;
    let mut states = Vec::with_capacity(dim);
    if n_up == 0 {
        states.push(0);
    } else {
        // Gosper's hack: next larger integer with the same popcount.
        let mut s: u64 = (1u64 << n_up) - 1;
        let limit = 1u64 << n_sites;
        while s < limit {
            states.push(s as u32);
            let c = s & s.wrapping_neg();
            let r = s + c;
            s = (((r ^ s) >> 2) / c) | r;
        }
    }
    debug_assert_eq!(states.len(), dim);
    Ok(SectorBasis {
        n_sites,
        n_up,
        states,
        binom,
    })
}
