//! Counter-based random streams keyed by `(seed, trial, purpose)`.
//!
//! Each stream is a ChaCha8 keystream: the key is derived from the master
//! seed and a purpose tag, and the trial index selects the ChaCha stream id.
//! Any trial can therefore be regenerated in isolation, in any order and on
//! any thread.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

#[derive(Debug, Clone)]
pub struct TrialRng(ChaCha8Rng);

impl TrialRng {
    pub fn new(seed: u64, trial: u64, purpose: &str) -> Self {
        let tag = fnv1a(purpose);
        let words = [
            splitmix64(seed),
            splitmix64(seed ^ tag),
            splitmix64(tag),
            splitmix64(splitmix64(seed).wrapping_add(tag)),
        ];
        let mut key = [0u8; 32];
        for (chunk, w) in key.chunks_exact_mut(8).zip(words) {
            chunk.copy_from_slice(&w.to_le_bytes());
        }
        let mut inner = ChaCha8Rng::from_seed(key);
        inner.set_stream(trial);
        Self(inner)
    }
}

impl RngCore for TrialRng {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}
