//! Unique test-vector pool: exact-membership tracking so one decode never
//! submits the same vector to hard-decision decoding twice.
//!
//! A hash set over the full symbol sequence gives amortized O(1) membership,
//! comfortably inside the O(N log N) total budget a search-tree structure
//! would offer, and the module boundary would admit such a drop-in.

use std::collections::HashSet;

#[derive(Debug, Default)]
pub struct UniquePool {
    set: HashSet<Box<[u16]>>,
}

impl UniquePool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(cap: usize) -> Self {
        UniquePool { set: HashSet::with_capacity(cap) }
    }

    /// True iff `tv` was not present; the pool contains it afterwards either
    /// way. Duplicates cost a lookup only (no allocation).
    pub fn insert_if_new(&mut self, tv: &[u16]) -> bool {
        if self.set.contains(tv) {
            return false;
        }
        self.set.insert(tv.into());
        true
    }

    /// Number of distinct vectors seen.
    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

// ====================================================================
// tests
// ====================================================================
