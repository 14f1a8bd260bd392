//! Stable hashing used everywhere determinism matters.
//!
//! Two families:
//! - `content_*`: SHA-256 digests for manifests, dedup keys, and n-gram
//!   membership. Collision-free for our purposes (128/256 bit).
//! - `mix64` / `key64`: a splitmix64-style avalanche mixer for cheap
//!   per-record decisions (sampling keys, stage assignment, projection
//!   signs). Not cryptographic; stable across platforms and versions,
//!   unlike `DefaultHasher`.

use sha2::{Digest, Sha256};

/// splitmix64 finalizer.
#[inline]
pub fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^= x >> 31;
    x
}

/// Combine words into one well-mixed word.
#[inline]
pub fn mix_parts(parts: &[u64]) -> u64 {
    let mut h = 0x9e37_79b9_7f4a_7c15u64;
    for (i, &p) in parts.iter().enumerate() {
        h = mix64(h ^ p.wrapping_add((i as u64 + 1).wrapping_mul(0x517c_c1b7_2722_0a95)));
    }
    mix64(h)
}

/// FNV-1a over bytes, then avalanched. Stable string hash.
#[inline]
pub fn hash_bytes(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    mix64(h)
}

/// Deterministic per-record key: mixes a run seed with a record id.
#[inline]
pub fn key64(seed: u64, id: &str) -> u64 {
    mix_parts(&[seed, hash_bytes(id.as_bytes())])
}

/// Full SHA-256 of bytes as lowercase hex. Used for content addressing.
pub fn content_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hex(&hasher.finalize())
}

/// First 128 bits of SHA-256 as a u128. Used for dedup and n-gram digests.
pub fn content_128(bytes: &[u8]) -> u128 {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let d = hasher.finalize();
    u128::from_be_bytes(d[..16].try_into().expect("16 bytes"))
}

/// Incremental SHA-256 over a sequence of byte chunks, hex encoded.
pub struct ContentHasher(Sha256);

impl ContentHasher {
    pub fn new() -> Self {
        ContentHasher(Sha256::new())
    }

    pub fn update(&mut self, bytes: &[u8]) {
        self.0.update(bytes);
    }

    pub fn finish_hex(self) -> String {
        hex(&self.0.finalize())
    }
}

impl Default for ContentHasher {
    fn default() -> Self {
        Self::new()
    }
}

fn hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}
