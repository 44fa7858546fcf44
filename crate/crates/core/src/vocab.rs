//! Word interning.
//!
//! Ids are assigned in first-occurrence order. The top bit of a `u32` is
//! reserved for the phrase-start marker used by n-gram keys, and
//! [`Vocab::OOV`] is never handed out, so any id that can appear inside a
//! key fits in 31 bits.

use rustc_hash::FxHashMap;

#[derive(Debug, Clone, Default)]
pub struct Vocab {
    words: Vec<String>,
    index: FxHashMap<String, u32>,
}

impl Vocab {
    /// Id used for tokens the vocabulary has never seen.
    pub const OOV: u32 = (1 << 31) - 1;

    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, word: &str) -> u32 {
        if let Some(&id) = self.index.get(word) {
            return id;
        }
        let id = self.words.len() as u32;
        assert!(id < Self::OOV, "vocabulary exceeds 2^31 - 1 words");
        self.words.push(word.to_owned());
        self.index.insert(word.to_owned(), id);
        id
    }

    pub fn get(&self, word: &str) -> Option<u32> {
        self.index.get(word).copied()
    }

    /// Like [`Vocab::get`], mapping unknown words to [`Vocab::OOV`].
    pub fn id_or_oov(&self, word: &str) -> u32 {
        self.get(word).unwrap_or(Self::OOV)
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    /// Position of every id in byte-wise sorted word order.
    pub fn sort_ranks(&self) -> Vec<u32> {
        let mut order: Vec<u32> = (0..self.words.len() as u32).collect();
        order.sort_unstable_by(|&a, &b| self.words[a as usize].cmp(&self.words[b as usize]));
        let mut ranks = vec![0; order.len()];
        for (rank, id) in order.into_iter().enumerate() {
            ranks[id as usize] = rank as u32;
        }
        ranks
    }
}
