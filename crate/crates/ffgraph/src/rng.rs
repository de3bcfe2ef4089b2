//! Deterministic seeding.
//!
//! Every random choice in this crate flows from one root seed through a
//! named sub-stream, so regenerating a graph never depends on how much
//! randomness an unrelated component consumed. A sub-stream is keyed by a
//! path of integers (stream tag, node index, matching index, ...); the path
//! is folded into a 64-bit key with SplitMix64 and the key seeds a ChaCha8
//! generator, which produces the same byte stream on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags, one per independent consumer of randomness.
pub(crate) mod tag {
    pub const ERDOS_RENYI: u64 = 0x01;
    pub const POISSON: u64 = 0x02;
    pub const EXPANDER_MATCHING: u64 = 0x03;
    pub const EXPANDER_RELABEL: u64 = 0x04;
    pub const FS_MATCHING: u64 = 0x05;
    pub const MONTE_CARLO: u64 = 0x06;
    pub const SWEEP_POINT: u64 = 0x07;
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Root of the deterministic sub-stream tree for one seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// 64-bit key of the sub-stream addressed by `path`.
    pub fn key(&self, path: &[u64]) -> u64 {
        let mut state = splitmix64(self.seed);
        for &component in path {
            state = splitmix64(state ^ component);
        }
        state
    }

    /// Portable generator for the sub-stream addressed by `path`.
    pub fn substream(&self, path: &[u64]) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.key(path))
    }
}

/// FNV-1a over bytes, for folding string labels into stream paths.
pub(crate) fn hash_label(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in label.as_bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
