//! Deterministic randomness: seeded streams for trials and keyed generators for lazy tables.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

/// A seeded ChaCha20 stream. Identical `(seed, stream)` pairs reproduce identical draws.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha20Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self::for_trial(seed, 0)
    }

    /// Counter-mode expansion of a master seed: trial `index` reads ChaCha stream `index`.
    pub fn for_trial(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { seed, stream: index, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        rand::Rng::random_range(self, 0..n)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.below(n as u64) as usize
    }

    pub fn bit(&mut self) -> bool {
        rand::Rng::random(self)
    }

    /// Uniform real in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        rand::Rng::random(self)
    }

    /// Independent child source whose seed is drawn from this stream.
    pub fn fork(&mut self) -> RandomSource {
        RandomSource::new(self.rng.next_u64())
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Generator determined by `(seed, domain, key)` alone, so lazily sampled table entries
/// do not depend on query order or thread interleaving.
pub fn keyed_rng(seed: u64, domain: &str, key: &[u8]) -> ChaCha20Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((domain.len() as u64).to_le_bytes());
    h.update(domain.as_bytes());
    h.update(key);
    let digest = h.finalize();
    let mut bytes = [0u8; 32];
    bytes.copy_from_slice(&digest);
    ChaCha20Rng::from_seed(bytes)
}

/// Little-endian concatenation of integer keys.
pub fn key_bytes(parts: &[u64]) -> Vec<u8> {
    parts.iter().flat_map(|p| p.to_le_bytes()).collect()
}
