//! Text count files.
//!
//! ```text
//! phraselm-counts v1 N=<N> C=<C>
//! <n> TAB <count> TAB <phrase_1> TAB ... TAB <phrase_n>
//! ```
//!
//! Words inside a phrase are joined by single spaces. Records are sorted by
//! phrase-level order, then by the phrase tuple, each phrase compared as a
//! sequence of byte-wise ordered words.

use std::cmp::Ordering;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{key_order, push_phrase, word_id, CountTable, NGramTable, PHRASE_START};
use crate::error::{Error, Result};
use crate::vocab::Vocab;

const MAGIC: &str = "phraselm-counts v1";

/// Sort code of one key element: phrase starts sort below continuation
/// words, so a phrase that is a prefix of another sorts first.
#[inline]
fn element_code(marked: u32, ranks: &[u32]) -> u32 {
    let rank = ranks[word_id(marked) as usize];
    if marked & PHRASE_START != 0 {
        rank
    } else {
        rank | PHRASE_START
    }
}

fn compare_keys(a: &[u32], b: &[u32], ranks: &[u32]) -> Ordering {
    a.iter()
        .map(|&w| element_code(w, ranks))
        .cmp(b.iter().map(|&w| element_code(w, ranks)))
}

/// Leading elements of a key packed into 128 bits, below the order, so
/// that comparing prefixes never contradicts [`compare_keys`]. Each element
/// takes `width` bits: a continuation flag above the word rank.
struct SortPrefix {
    rank_bits: u32,
    width: u32,
    fields: usize,
}

impl SortPrefix {
    fn new(vocab_len: usize) -> Self {
        let rank_bits = (usize::BITS - vocab_len.leading_zeros()).max(1);
        let width = rank_bits + 1;
        Self {
            rank_bits,
            width,
            fields: (112 / width) as usize,
        }
    }

    fn pack(&self, key: &[u32], ranks: &[u32]) -> [u64; 2] {
        let mut p = (key_order(key).min(u16::MAX as usize) as u128) << 112;
        for (i, &w) in key.iter().take(self.fields).enumerate() {
            let rank = ranks[word_id(w) as usize] as u128;
            let cont = (w & PHRASE_START == 0) as u128;
            let code = cont << self.rank_bits | rank;
            p |= code << (112 - self.width * (i as u32 + 1));
        }
        [(p >> 64) as u64, p as u64]
    }
}

fn push_u64(buf: &mut Vec<u8>, mut v: u64) {
    let mut digits = [0u8; 20];
    let mut i = digits.len();
    loop {
        i -= 1;
        digits[i] = b'0' + (v % 10) as u8;
        v /= 10;
        if v == 0 {
            break;
        }
    }
    buf.extend_from_slice(&digits[i..]);
}

/// Writes `table` in sorted count-file form.
pub fn write_counts<W: Write>(table: &CountTable, vocab: &Vocab, out: W) -> std::io::Result<()> {
    let ranks = vocab.sort_ranks();
    let prefix = SortPrefix::new(vocab.len());
    let mut records: Vec<([u64; 2], u64)> = table
        .table
        .located()
        .filter(|&(_, _, c)| c > 0)
        .map(|(loc, k, _)| (prefix.pack(k, &ranks), loc))
        .collect();
    records.sort_unstable_by(|x, y| {
        x.0.cmp(&y.0)
            .then_with(|| compare_keys(table.table.at(x.1).0, table.table.at(y.1).0, &ranks))
    });

    let mut out = BufWriter::with_capacity(1 << 20, out);
    writeln!(out, "{MAGIC} N={} C={}", table.order(), table.total())?;
    let mut line = Vec::with_capacity(256);
    for (_, loc) in records {
        let (key, count) = table.table.at(loc);
        line.clear();
        push_u64(&mut line, key_order(key) as u64);
        line.push(b'\t');
        push_u64(&mut line, count);
        for &w in key {
            let sep = if w & PHRASE_START != 0 { b'\t' } else { b' ' };
            line.push(sep);
            line.extend_from_slice(vocab.word(word_id(w)).as_bytes());
        }
        line.push(b'\n');
        out.write_all(&line)?;
    }
    out.flush()
}

pub fn save_counts(table: &CountTable, vocab: &Vocab, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_counts(table, vocab, file).map_err(|e| Error::io(path, e))
}

fn parse_header(line: &str) -> Option<(usize, u64)> {
    let rest = line.strip_prefix(MAGIC)?.strip_prefix(' ')?;
    let (n, c) = rest.split_once(' ')?;
    let n = n.strip_prefix("N=")?.parse().ok()?;
    let c = c.strip_prefix("C=")?.parse().ok()?;
    Some((n, c))
}

/// Reads a count file, interning its words into `vocab`.
pub fn load_counts(path: impl AsRef<Path>, vocab: &mut Vocab) -> Result<CountTable> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let bad = |line: usize, msg: String| Error::format(path, line, msg);

    let header = match lines.next() {
        Some(l) => l.map_err(|e| Error::io(path, e))?,
        None => return Err(bad(1, "missing header".into())),
    };
    let (order, total) =
        parse_header(&header).ok_or_else(|| bad(1, format!("bad header {header:?}")))?;
    if order == 0 {
        return Err(bad(1, "order must be at least 1".into()));
    }

    let mut table = NGramTable::new();
    let mut key = Vec::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let line = line.map_err(|e| Error::io(path, e))?;
        let mut fields = line.split('\t');
        let n: usize = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| bad(lineno, "bad order field".into()))?;
        if n == 0 || n > order {
            return Err(bad(lineno, format!("order {n} outside 1..={order}")));
        }
        let count_field = fields.next().unwrap_or("");
        let count: u64 = count_field
            .parse()
            .map_err(|_| bad(lineno, format!("bad count {count_field:?}")))?;
        key.clear();
        let mut phrases = 0;
        let mut ids = Vec::new();
        for phrase in fields {
            ids.clear();
            for w in phrase.split(' ') {
                if w.is_empty() || w.contains(char::is_whitespace) {
                    return Err(bad(lineno, format!("bad phrase {phrase:?}")));
                }
                ids.push(vocab.intern(w));
            }
            push_phrase(&mut key, &ids);
            phrases += 1;
        }
        if phrases != n {
            return Err(bad(lineno, format!("expected {n} phrases, found {phrases}")));
        }
        if count == 0 {
            continue;
        }
        if !table.add(&key, count) {
            return Err(bad(lineno, "duplicate record".into()));
        }
    }

    let counts = CountTable::from_table(order, table);
    if counts.total() != total {
        return Err(bad(
            1,
            format!("header C={total} but unigram records sum to {}", counts.total()),
        ));
    }
    Ok(counts)
}
