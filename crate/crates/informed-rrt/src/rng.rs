//! Seeded random streams.
//!
//! All sampling in this crate draws from [`RngStream`], a ChaCha8 stream
//! that remembers its seed. ChaCha output is specified byte-exactly, so a
//! seed pins an entire experiment: same seed, same draw sequence, on any
//! platform.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A seeded random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        RngStream {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream for trial `trial` of an experiment with base seed
    /// `base_seed`: seeded with `base_seed + trial` (wrapping).
    pub fn for_trial(base_seed: u64, trial: u64) -> Self {
        Self::from_seed(base_seed.wrapping_add(trial))
    }

    /// The seed this stream was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }
}
