//! Content digests for canonical forms and structure-sharing memo keys.
//!
//! Digests are SHA-256 with a short domain-separation tag, so hashes of
//! different kinds of structure (hyperset graphs, signed games, …) never
//! collide by construction accident. Equality of digests is used as equality
//! of canonical structure throughout the crate.

use std::fmt;

use sha2::{Digest as _, Sha256};

/// A 256-bit content digest.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest([u8; 32]);

impl Digest {
    /// Full lowercase hex spelling.
    pub fn hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Shortened hex prefix for reports; long enough to be unambiguous in
    /// any enumeration this crate performs.
    pub fn short_hex(&self) -> String {
        self.hex()[..16].to_string()
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", self.short_hex())
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

/// Incremental digest builder.
pub struct Hasher(Sha256);

impl Hasher {
    /// Start a digest under a domain tag.
    pub fn new(tag: &str) -> Self {
        let mut h = Sha256::new();
        h.update((tag.len() as u64).to_le_bytes());
        h.update(tag.as_bytes());
        Hasher(h)
    }

    pub fn u64(&mut self, n: u64) -> &mut Self {
        self.0.update(n.to_le_bytes());
        self
    }

    pub fn usize(&mut self, n: usize) -> &mut Self {
        self.u64(n as u64)
    }

    pub fn bytes(&mut self, b: &[u8]) -> &mut Self {
        self.0.update((b.len() as u64).to_le_bytes());
        self.0.update(b);
        self
    }

    pub fn digest(&mut self, d: &Digest) -> &mut Self {
        self.0.update(d.0);
        self
    }

    pub fn finish(self) -> Digest {
        Digest(self.0.finalize().into())
    }
}

/// Digest of a list of digests (order-sensitive).
pub fn of_digests(tag: &str, ds: &[Digest]) -> Digest {
    let mut h = Hasher::new(tag);
    h.usize(ds.len());
    for d in ds {
        h.digest(d);
    }
    h.finish()
}
