//! Phrase n-gram enumeration and corpus-level counting.
//!
//! A phrase n-gram is a tuple of `n` adjacent spans of one sentence. It is
//! encoded as the concatenated word ids of its spans, with [`PHRASE_START`]
//! set on the first word of every span. The encoding is injective, and the
//! number of marked words is the phrase-level order.

mod io;
mod table;

use std::collections::BTreeMap;

pub use io::{load_counts, save_counts, write_counts};
pub use table::NGramTable;

use crate::corpus::{Corpus, Sentence};
use crate::error::{Error, Result};
use crate::vocab::Vocab;
use table::{key_hash, shard_of, SHARDS};

pub const PHRASE_START: u32 = 1 << 31;

/// Appends one phrase to an encoded key.
pub fn push_phrase(key: &mut Vec<u32>, words: &[u32]) {
    debug_assert!(!words.is_empty());
    key.push(words[0] | PHRASE_START);
    key.extend_from_slice(&words[1..]);
}

/// Encodes a tuple of phrases.
pub fn encode_key<'a>(phrases: impl IntoIterator<Item = &'a [u32]>) -> Vec<u32> {
    let mut key = Vec::new();
    for p in phrases {
        push_phrase(&mut key, p);
    }
    key
}

/// Phrase-level order of an encoded key.
pub fn key_order(key: &[u32]) -> usize {
    key.iter().filter(|&&w| w & PHRASE_START != 0).count()
}

/// Splits an encoded key into its phrases, still carrying the start marker
/// on each phrase's first word.
pub fn key_phrases(key: &[u32]) -> impl Iterator<Item = &[u32]> {
    let mut rest = key;
    std::iter::from_fn(move || {
        if rest.is_empty() {
            return None;
        }
        let end = rest[1..]
            .iter()
            .position(|&w| w & PHRASE_START != 0)
            .map_or(rest.len(), |p| p + 1);
        let (head, tail) = rest.split_at(end);
        rest = tail;
        Some(head)
    })
}

#[inline]
pub fn word_id(marked: u32) -> u32 {
    marked & !PHRASE_START
}

/// Decodes a key to its phrases' words.
pub fn decode_key(key: &[u32], vocab: &Vocab) -> Vec<Vec<String>> {
    key_phrases(key)
        .map(|p| p.iter().map(|&w| vocab.word(word_id(w)).to_owned()).collect())
        .collect()
}

/// Calls `f` once for every tuple of `1..=order` adjacent spans of `words`
/// (each tuple once per boundary placement), skipping spans longer than
/// `max_len`. Keys are emitted in encoded form.
pub fn for_each_phrase_ngram<F>(words: &[u32], order: usize, max_len: Option<usize>, mut f: F)
where
    F: FnMut(&[u32]),
{
    if order == 0 || words.is_empty() {
        return;
    }
    let mut key = Vec::with_capacity(words.len());
    for start in 0..words.len() {
        extend_from(words, start, order, max_len, &mut key, &mut f);
    }
}

fn extend_from<F>(
    words: &[u32],
    start: usize,
    remaining: usize,
    max_len: Option<usize>,
    key: &mut Vec<u32>,
    f: &mut F,
) where
    F: FnMut(&[u32]),
{
    let mark = key.len();
    let limit = max_len.map_or(words.len(), |l| (start + l).min(words.len()));
    for end in start + 1..=limit {
        if end == start + 1 {
            key.push(words[start] | PHRASE_START);
        } else {
            key.push(words[end - 1]);
        }
        f(key);
        if remaining > 1 && end < words.len() {
            let inner = key.len();
            extend_from(words, end, remaining - 1, max_len, key, f);
            key.truncate(inner);
        }
    }
    key.truncate(mark);
}

/// String-level multiset of phrase n-grams of one sentence, in emission order.
pub fn enumerate_phrase_ngrams(
    sentence: &Sentence,
    order: usize,
    max_len: Option<usize>,
) -> Vec<Vec<Vec<String>>> {
    let mut vocab = Vocab::new();
    let ids: Vec<u32> = sentence.tokens().iter().map(|t| vocab.intern(t)).collect();
    let mut out = Vec::new();
    for_each_phrase_ngram(&ids, order, max_len, |k| out.push(decode_key(k, &vocab)));
    out
}

#[derive(Debug, Clone)]
pub struct CountConfig {
    /// Maximum phrase-level order.
    pub order: usize,
    /// Longest phrase in words; `None` is unbounded.
    pub max_phrase_len: Option<usize>,
    /// Cap on distinct keys held in memory.
    pub max_keys: Option<usize>,
    pub threads: usize,
}

impl CountConfig {
    pub fn new(order: usize) -> Self {
        Self {
            order,
            max_phrase_len: None,
            max_keys: None,
            threads: 1,
        }
    }

    pub fn max_phrase_len(mut self, len: Option<usize>) -> Self {
        self.max_phrase_len = len;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn max_keys(mut self, max_keys: Option<usize>) -> Self {
        self.max_keys = max_keys;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::Config("order must be at least 1".into()));
        }
        if self.max_phrase_len == Some(0) {
            return Err(Error::Config("maximum phrase length must be at least 1".into()));
        }
        Ok(())
    }
}

/// Phrase n-gram counts with their totals and counts-of-counts.
#[derive(Debug, Clone)]
pub struct CountTable {
    order: usize,
    table: NGramTable,
    total: u64,
    count_of_counts: Vec<BTreeMap<u64, u64>>,
}

impl CountTable {
    /// Wraps raw counts, computing `C` and counts-of-counts.
    pub fn from_table(order: usize, table: NGramTable) -> Self {
        let mut t = Self {
            order,
            table,
            total: 0,
            count_of_counts: Vec::new(),
        };
        t.refresh();
        t
    }

    fn refresh(&mut self) {
        let mut coc = vec![BTreeMap::new(); self.order];
        let mut total = 0;
        for (key, count) in self.table.iter() {
            if count == 0 {
                continue;
            }
            let n = key_order(key);
            *coc[n - 1].entry(count).or_insert(0) += 1;
            if n == 1 {
                total += count;
            }
        }
        self.count_of_counts = coc;
        self.total = total;
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Occurrences of an encoded key; 0 when unseen.
    pub fn count(&self, key: &[u32]) -> u64 {
        self.table.get(key)
    }

    /// `C`, the number of single-phrase occurrences.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// `r -> N_r` for keys of phrase-level order `n`.
    pub fn count_of_counts(&self, n: usize) -> &BTreeMap<u64, u64> {
        &self.count_of_counts[n - 1]
    }

    /// Distinct keys.
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u32], u64)> + '_ {
        self.table.iter()
    }

    /// Key-wise addition; both tables must share one vocabulary.
    pub fn merge(&mut self, other: &CountTable) {
        if other.order > self.order {
            self.order = other.order;
        }
        self.table.merge(&other.table);
        self.refresh();
    }

    /// Verifies `C` and the counts-of-counts against a recount.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut per_order = vec![0u64; self.order];
        for (key, count) in self.iter() {
            let n = key_order(key);
            if n == 0 || n > self.order {
                return Err(format!("key of order {n} in a table of order {}", self.order));
            }
            per_order[n - 1] += count;
        }
        if per_order[0] != self.total {
            return Err(format!("C = {} but order-1 counts sum to {}", self.total, per_order[0]));
        }
        for (n, sum) in per_order.iter().enumerate() {
            let mass: u64 = self.count_of_counts[n].iter().map(|(r, nr)| r * nr).sum();
            if mass != *sum {
                return Err(format!("order {}: sum r*N_r = {mass}, counts sum to {sum}", n + 1));
            }
        }
        Ok(())
    }
}

/// Counts phrase n-grams over every sentence of `corpus`.
pub fn accumulate_counts(corpus: &Corpus, cfg: &CountConfig) -> Result<CountTable> {
    count_sentences(corpus.ids(), cfg)
}

/// Counts phrase n-grams over id-encoded sentences.
///
/// With several threads, every worker walks the whole corpus but only
/// stores keys whose hash falls in the shards it owns, so no key is held
/// twice and no merge pass is needed.
pub fn count_sentences(sentences: &[Vec<u32>], cfg: &CountConfig) -> Result<CountTable> {
    cfg.validate()?;
    let mut table = NGramTable::new();
    let threads = cfg.threads.clamp(1, SHARDS);
    if threads == 1 {
        let mut distinct = 0usize;
        for (s, words) in sentences.iter().enumerate() {
            for_each_phrase_ngram(words, cfg.order, cfg.max_phrase_len, |key| {
                if table.add(key, 1) {
                    distinct += 1;
                }
            });
            if let Some(limit) = cfg.max_keys.filter(|&l| distinct > l) {
                return Err(Error::Capacity { limit, sentence: s });
            }
        }
    } else {
        count_partitioned(sentences, cfg, threads, &mut table)?;
    }
    Ok(CountTable::from_table(cfg.order, table))
}

fn count_partitioned(
    sentences: &[Vec<u32>],
    cfg: &CountConfig,
    threads: usize,
    table: &mut NGramTable,
) -> Result<()> {
    let mut owned: Vec<Vec<&mut table::Shard>> = (0..threads).map(|_| Vec::new()).collect();
    for (i, shard) in table.shards_mut().iter_mut().enumerate() {
        owned[i % threads].push(shard);
    }
    // With a key budget, work proceeds in blocks so the first sentence that
    // crosses it is known exactly and the overshoot stays bounded.
    let block_len = if cfg.max_keys.is_some() { 4096 } else { sentences.len().max(1) };
    let mut distinct = 0usize;
    for (b, block) in sentences.chunks(block_len).enumerate() {
        let fresh: Vec<Vec<usize>> = std::thread::scope(|scope| {
            let handles: Vec<_> = owned
                .iter_mut()
                .enumerate()
                .map(|(worker, shards)| {
                    scope.spawn(move || {
                        let mut fresh = vec![0usize; if cfg.max_keys.is_some() { block.len() } else { 0 }];
                        for (s, words) in block.iter().enumerate() {
                            let mut added = 0;
                            for_each_phrase_ngram(words, cfg.order, cfg.max_phrase_len, |key| {
                                let h = key_hash(key);
                                let shard = shard_of(h);
                                if shard % threads == worker && shards[shard / threads].add(h, key, 1) {
                                    added += 1;
                                }
                            });
                            if let Some(f) = fresh.get_mut(s) {
                                *f = added;
                            }
                        }
                        fresh
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        if let Some(limit) = cfg.max_keys {
            for s in 0..block.len() {
                distinct += fresh.iter().map(|f| f[s]).sum::<usize>();
                if distinct > limit {
                    return Err(Error::Capacity {
                        limit,
                        sentence: b * block_len + s,
                    });
                }
            }
        }
    }
    Ok(())
}
