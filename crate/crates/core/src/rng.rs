//! Deterministic random streams.
//!
//! Every source of randomness in the crate is a [`SeededRng`]: ChaCha8 keyed
//! from a 64-bit seed. Independent child streams are derived with
//! [`SeededRng::fork`], which mixes the parent seed and a label through
//! SplitMix64, so a trial identified by `(cell, seed, root)` always sees the
//! same bits no matter which thread runs it or in what order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One step of the SplitMix64 output function.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derives an independent stream. Depends only on this stream's seed and
    /// `label`, never on how many values have been drawn so far.
    pub fn fork(&self, label: u64) -> Self {
        Self::new(derive_seed(self.seed, label))
    }
}

/// Seed of the child stream `fork(label)` of a stream seeded with `seed`.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    splitmix64(seed ^ splitmix64(label.wrapping_add(0xD1B5_4A32_D192_ED03)))
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
