//! Stable 64-bit hashing used for n-gram keys and configuration fingerprints.
//!
//! Tokens are hashed with XXH3-64 over their UTF-8 bytes; an n-gram key is the
//! XXH3-64 of the little-endian concatenation of its token hashes. Both are
//! independent of platform endianness and pointer width.

use xxhash_rust::xxh3::{xxh3_64, Xxh3};

pub fn token_hash(token: &str) -> u64 {
    xxh3_64(token.as_bytes())
}

/// Key of the n-gram whose token hashes are `window`.
pub fn ngram_key(window: &[u64]) -> u64 {
    let mut buf = [0u8; 8 * 8];
    if window.len() <= 8 {
        for (chunk, h) in buf.chunks_exact_mut(8).zip(window) {
            chunk.copy_from_slice(&h.to_le_bytes());
        }
        xxh3_64(&buf[..8 * window.len()])
    } else {
        let mut hasher = Xxh3::new();
        for h in window {
            hasher.update(&h.to_le_bytes());
        }
        hasher.digest()
    }
}

/// Incremental fingerprint builder with length-prefixed fields.
#[derive(Clone, Default)]
pub struct Fingerprint {
    inner: Xxh3,
}

impl Fingerprint {
    pub fn new() -> Self {
        Self { inner: Xxh3::new() }
    }

    pub fn str(mut self, s: &str) -> Self {
        self.inner.update(&(s.len() as u64).to_le_bytes());
        self.inner.update(s.as_bytes());
        self
    }

    pub fn u64(mut self, v: u64) -> Self {
        self.inner.update(&v.to_le_bytes());
        self
    }

    pub fn finish(&self) -> u64 {
        self.inner.digest()
    }
}

impl core::fmt::Debug for Fingerprint {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Fingerprint({:016x})", self.finish())
    }
}
