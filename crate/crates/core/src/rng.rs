//! Named, seeded random streams.
//!
//! Every stochastic component draws from a ChaCha stream keyed by a domain
//! tag plus integer parts, so streams never alias across components and the
//! output is stable across platforms and crate versions.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Derive a 32-byte key from a tag and integer parts.
pub fn derive_key(tag: &str, parts: &[u64]) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update((tag.len() as u64).to_le_bytes());
    hasher.update(tag.as_bytes());
    for p in parts {
        hasher.update(p.to_le_bytes());
    }
    hasher.finalize().into()
}

/// A deterministic generator for `(tag, parts)`.
pub fn stream(tag: &str, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(derive_key(tag, parts))
}

/// Hash a row of reals (by bit pattern) together with a seed.
pub fn hash_row(tag: &str, seed: u64, row: &[f64]) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(tag.as_bytes());
    hasher.update(seed.to_le_bytes());
    for v in row {
        // normalise -0.0 so equal rows hash equally
        let v = if *v == 0.0 { 0.0f64 } else { *v };
        hasher.update(v.to_bits().to_le_bytes());
    }
    hasher.finalize().into()
}
