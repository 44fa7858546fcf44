//! Arena-backed hash table from encoded phrase n-gram keys to counts.
//!
//! Keys are copied once into a per-shard `u32` arena; the hash index stores
//! only a 32-bit entry number and a 32-bit hash fragment, so growing the
//! index never touches key memory. The table is split into a fixed number of
//! shards selected by key hash. The shard layout does not depend on how many
//! threads filled it, which keeps the contents identical for any thread count.

use std::hash::Hasher;

use hashbrown::HashTable;
use rustc_hash::FxHasher;

pub const SHARDS: usize = 64;

#[derive(Clone, Copy)]
struct Slot {
    entry: u32,
    hash: u32,
}

#[inline]
fn slot_hash(fragment: u32) -> u64 {
    (fragment as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Full 64-bit key hash; low bits pick the shard, high bits feed the index.
#[inline]
pub fn key_hash(key: &[u32]) -> u64 {
    let mut h = FxHasher::default();
    for &w in key {
        h.write_u32(w);
    }
    h.write_usize(key.len());
    // murmur3 finalizer; FxHasher alone leaves the low bits weak
    let mut x = h.finish();
    x ^= x >> 33;
    x = x.wrapping_mul(0xff51_afd7_ed55_8ccd);
    x ^= x >> 33;
    x = x.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    x ^ (x >> 33)
}

#[inline]
pub fn shard_of(hash: u64) -> usize {
    (hash as usize) % SHARDS
}

#[derive(Clone)]
pub(crate) struct Shard {
    index: HashTable<Slot>,
    arena: Vec<u32>,
    offsets: Vec<usize>,
    counts: Vec<u64>,
}

impl Default for Shard {
    fn default() -> Self {
        Self {
            index: HashTable::new(),
            arena: Vec::new(),
            offsets: vec![0],
            counts: Vec::new(),
        }
    }
}

impl Shard {
    #[inline]
    fn key(&self, entry: usize) -> &[u32] {
        &self.arena[self.offsets[entry]..self.offsets[entry + 1]]
    }

    /// Adds `count` to `key`; returns true when the key was new.
    pub(crate) fn add(&mut self, hash: u64, key: &[u32], count: u64) -> bool {
        let fragment = (hash >> 32) as u32;
        let h = slot_hash(fragment);
        let (arena, offsets) = (&self.arena, &self.offsets);
        let found = self.index.find(h, |s| {
            s.hash == fragment && &arena[offsets[s.entry as usize]..offsets[s.entry as usize + 1]] == key
        });
        if let Some(slot) = found {
            self.counts[slot.entry as usize] += count;
            return false;
        }
        let entry = self.counts.len();
        assert!(entry < u32::MAX as usize, "shard holds too many keys");
        self.arena.extend_from_slice(key);
        self.offsets.push(self.arena.len());
        self.counts.push(count);
        self.index.insert_unique(
            h,
            Slot {
                entry: entry as u32,
                hash: fragment,
            },
            |s| slot_hash(s.hash),
        );
        true
    }

    fn get(&self, hash: u64, key: &[u32]) -> u64 {
        let fragment = (hash >> 32) as u32;
        self.index
            .find(slot_hash(fragment), |s| s.hash == fragment && self.key(s.entry as usize) == key)
            .map_or(0, |s| self.counts[s.entry as usize])
    }

    fn len(&self) -> usize {
        self.counts.len()
    }
}

#[derive(Clone)]
pub struct NGramTable {
    shards: Vec<Shard>,
}

impl Default for NGramTable {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Debug for NGramTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NGramTable").field("len", &self.len()).finish()
    }
}

impl NGramTable {
    pub fn new() -> Self {
        Self {
            shards: (0..SHARDS).map(|_| Shard::default()).collect(),
        }
    }

    pub fn add(&mut self, key: &[u32], count: u64) -> bool {
        let h = key_hash(key);
        self.shards[shard_of(h)].add(h, key, count)
    }

    pub fn get(&self, key: &[u32]) -> u64 {
        let h = key_hash(key);
        self.shards[shard_of(h)].get(h, key)
    }

    pub fn len(&self) -> usize {
        self.shards.iter().map(Shard::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All entries in storage order, which is deterministic but unsorted.
    pub fn iter(&self) -> impl Iterator<Item = (&[u32], u64)> + '_ {
        self.shards
            .iter()
            .flat_map(|s| (0..s.len()).map(move |e| (s.key(e), s.counts[e])))
    }

    /// Entries tagged with a stable location usable with [`NGramTable::at`].
    pub(crate) fn located(&self) -> impl Iterator<Item = (u64, &[u32], u64)> + '_ {
        self.shards.iter().enumerate().flat_map(|(i, s)| {
            (0..s.len()).map(move |e| (((i as u64) << 32) | e as u64, s.key(e), s.counts[e]))
        })
    }

    pub(crate) fn at(&self, location: u64) -> (&[u32], u64) {
        let s = &self.shards[(location >> 32) as usize];
        let e = (location & 0xffff_ffff) as usize;
        (s.key(e), s.counts[e])
    }

    pub(crate) fn shards_mut(&mut self) -> &mut [Shard] {
        &mut self.shards
    }

    /// Key-wise addition of `other` into `self`.
    pub fn merge(&mut self, other: &NGramTable) {
        for (key, count) in other.iter() {
            self.add(key, count);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn add_and_get() {
        let mut t = NGramTable::new();
        assert!(t.add(&[1, 2], 1));
        assert!(!t.add(&[1, 2], 2));
        assert!(t.add(&[2, 1], 1));
        assert!(t.add(&[1], 5));
        assert_eq!(t.get(&[1, 2]), 3);
        assert_eq!(t.get(&[2, 1]), 1);
        assert_eq!(t.get(&[1]), 5);
        assert_eq!(t.get(&[1, 2, 3]), 0);
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn matches_std_hashmap_under_load() {
        let mut t = NGramTable::new();
        let mut reference: HashMap<Vec<u32>, u64> = HashMap::new();
        let mut x: u64 = 12345;
        for _ in 0..50_000 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let len = 1 + (x >> 60) as usize % 4;
            let key: Vec<u32> = (0..len).map(|i| ((x >> (8 * i)) & 0x3f) as u32).collect();
            t.add(&key, 1);
            *reference.entry(key).or_default() += 1;
        }
        assert_eq!(t.len(), reference.len());
        for (k, v) in &reference {
            assert_eq!(t.get(k), *v);
        }
        let total: u64 = t.iter().map(|(_, c)| c).sum();
        assert_eq!(total, 50_000);
    }

    #[test]
    fn merge_adds_keywise() {
        let mut a = NGramTable::new();
        a.add(&[1], 2);
        a.add(&[2], 1);
        let mut b = NGramTable::new();
        b.add(&[2], 4);
        b.add(&[3], 1);
        a.merge(&b);
        assert_eq!((a.get(&[1]), a.get(&[2]), a.get(&[3])), (2, 5, 1));
    }
}
