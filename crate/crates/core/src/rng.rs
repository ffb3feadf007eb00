//! Seed derivation for reproducible trials.
//!
//! Each trial reads its own stream, seeded from the master seed and the
//! trial's coordinates (cell or subset, round, trial index) through
//! [`mix64`]. Results therefore do not depend on scheduling.

use rand::RngCore;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer (Stafford variant 13).
#[inline]
pub const fn avalanche(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `parts` into `seed`: `h ← avalanche(h ⊕ avalanche(part + k·φ))`
/// with `φ` the 64-bit golden-ratio constant and `k` the 1-based position.
pub fn mix64(seed: u64, parts: &[u64]) -> u64 {
    let mut h = avalanche(seed);
    for (k, &part) in parts.iter().enumerate() {
        let salt = GOLDEN.wrapping_mul(k as u64 + 1);
        h = avalanche(h ^ avalanche(part.wrapping_add(salt)));
    }
    h
}

/// SplitMix64 generator. Cheap to create, which matters because a fresh
/// stream is made for every trial.
#[derive(Debug, Clone)]
pub struct TrialStream {
    state: u64,
}

impl TrialStream {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn derive(seed: u64, parts: &[u64]) -> Self {
        Self::new(mix64(seed, parts))
    }
}

impl RngCore for TrialStream {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        avalanche(self.state)
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let v = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&v[..chunk.len()]);
        }
    }
}
