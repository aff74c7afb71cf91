//! Seeded randomness. Each party in a run draws from its own ChaCha stream
//! keyed by the run seed, so substituting a cheating party never perturbs
//! the honest party's coins.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::protocols::Party;

/// SplitMix64 finalizer.
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed for trial `index` under `master`.
pub fn split_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ index)
}

/// One party's random stream for a single run.
#[derive(Clone, Debug)]
pub struct PartyRng {
    inner: ChaCha8Rng,
}

impl PartyRng {
    pub fn new(seed: u64, party: Party) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(match party {
            Party::Alice => 1,
            Party::Bob => 2,
        });
        Self { inner }
    }

    pub fn bit(&mut self) -> u8 {
        u8::from(self.inner.random_bool(0.5))
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    /// `amount` distinct indices from `0..length`, in ascending order.
    pub fn subset(&mut self, length: usize, amount: usize) -> Vec<usize> {
        let mut v = rand::seq::index::sample(&mut self.inner, length, amount).into_vec();
        v.sort_unstable();
        v
    }
}
