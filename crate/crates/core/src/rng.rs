//! Seeded randomness helpers.
//!
//! All sampling goes through [`ChaCha8Rng`] so streams are identical across
//! platforms. Index draws use a `u32` range because `usize` sampling differs
//! between 32- and 64-bit targets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives a child seed from a global seed and a string label.
pub fn child_seed(seed: u64, label: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

/// Uniform index in `0..len`. `len` must be non-zero.
pub fn pick<R: Rng + ?Sized>(rng: &mut R, len: usize) -> usize {
    debug_assert!(len > 0);
    let bound = u32::try_from(len).unwrap_or(u32::MAX);
    rng.gen_range(0..bound) as usize
}

/// Bernoulli draw against a uniform `f64` in `[0, 1)`.
pub fn chance<R: Rng + ?Sized>(rng: &mut R, p: f64) -> bool {
    rng.gen::<f64>() < p
}

/// Fisher-Yates shuffle using [`pick`].
pub fn shuffle<T, R: Rng + ?Sized>(rng: &mut R, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = pick(rng, i + 1);
        items.swap(i, j);
    }
}

/// Lowercase hex of the first `bytes` bytes of SHA-256 over `parts`,
/// separated by NUL.
pub fn stable_hash_hex(parts: &[&[u8]], bytes: usize) -> alloc::string::String {
    use core::fmt::Write;
    let mut hasher = Sha256::new();
    for (i, part) in parts.iter().enumerate() {
        if i > 0 {
            hasher.update([0u8]);
        }
        hasher.update(part);
    }
    let digest = hasher.finalize();
    let mut out = alloc::string::String::with_capacity(bytes * 2);
    for b in digest.iter().take(bytes) {
        let _ = write!(out, "{b:02x}");
    }
    out
}
