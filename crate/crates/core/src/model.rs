//! Count-based phrase and word n-gram probabilities.
//!
//! A [`TrainedModel`] owns two count tables over one vocabulary: phrase
//! n-grams up to the phrase-level order, and word n-grams (phrases of a
//! single word) up to the baseline order. Conditional estimates are relative
//! frequencies. The smoothed estimate Good-Turing-discounts the joint count
//! and interpolates with a product of word unigram probabilities:
//!
//! ```text
//! P*(p | h) = λ · r*(h p) / C(h)  +  (1 − λ) · Π_i P(w_i) / (Σ_w P(w))^len(p)
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::corpus::{Corpus, Sentence};
use crate::counting::{
    count_sentences, encode_key, load_counts, push_phrase, save_counts, CountConfig, CountTable,
};
use crate::error::{Error, Result};
use crate::vocab::Vocab;

pub const PHRASE_COUNTS: &str = "phrase.counts";
pub const WORD_COUNTS: &str = "word.counts";
pub const META: &str = "meta";

/// Uniform prior over segmentations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PriorMode {
    /// `2^-(I-1)`: one over the true number of segmentations.
    #[default]
    Exact,
    /// `2^-I`.
    HalfPerWord,
    /// No prior factor.
    None,
}

impl FromStr for PriorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(PriorMode::Exact),
            "half-per-word" => Ok(PriorMode::HalfPerWord),
            "none" => Ok(PriorMode::None),
            _ => Err(Error::Config(format!("unknown prior mode {s:?} (exact|half-per-word|none)"))),
        }
    }
}

impl fmt::Display for PriorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PriorMode::Exact => "exact",
            PriorMode::HalfPerWord => "half-per-word",
            PriorMode::None => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    /// Phrase-level n-gram order.
    pub order: usize,
    pub max_phrase_len: Option<usize>,
    /// Order of the word n-gram table backing the baseline.
    pub word_order: usize,
    pub lambda: f64,
    /// Good-Turing leaves counts `r >= gt_max_r` untouched.
    pub gt_max_r: u64,
    pub prior: PriorMode,
    pub bos_eos: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            order: 3,
            max_phrase_len: None,
            word_order: 4,
            lambda: 0.4,
            gt_max_r: 5,
            prior: PriorMode::Exact,
            bos_eos: false,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order == 0 || self.word_order == 0 {
            return Err(Error::Config("orders must be at least 1".into()));
        }
        if self.max_phrase_len == Some(0) {
            return Err(Error::Config("maximum phrase length must be at least 1".into()));
        }
        check_lambda(self.lambda)?;
        if self.gt_max_r == 0 {
            return Err(Error::Config("Good-Turing cutoff must be at least 1".into()));
        }
        Ok(())
    }

    fn to_meta(&self) -> String {
        let len = self
            .max_phrase_len
            .map_or_else(|| "none".to_owned(), |l| l.to_string());
        format!(
            "phraselm-model v1\norder={}\nmax_phrase_len={len}\nword_order={}\nlambda={}\ngt_max_r={}\nprior={}\nbos_eos={}\n",
            self.order, self.word_order, self.lambda, self.gt_max_r, self.prior, self.bos_eos
        )
    }

    fn from_meta(text: &str, path: &Path) -> Result<Self> {
        let bad = |line: usize, msg: String| Error::format(path, line, msg);
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "phraselm-model v1")) => {}
            _ => return Err(bad(1, "missing phraselm-model v1 header".into())),
        }
        let mut fields = BTreeMap::new();
        for (i, line) in lines {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(i + 1, format!("expected key=value, got {line:?}")))?;
            fields.insert(k.to_owned(), (i + 1, v.to_owned()));
        }
        let mut take = |key: &str| {
            fields
                .remove(key)
                .ok_or_else(|| bad(1, format!("missing field {key}")))
        };
        fn parse<T: FromStr>(path: &Path, (line, v): (usize, String), key: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::format(path, line, format!("bad {key} value {v:?}")))
        }
        let order = parse(path, take("order")?, "order")?;
        let (l_line, l) = take("max_phrase_len")?;
        let max_phrase_len = match l.as_str() {
            "none" => None,
            _ => Some(parse(path, (l_line, l), "max_phrase_len")?),
        };
        let config = ModelConfig {
            order,
            max_phrase_len,
            word_order: parse(path, take("word_order")?, "word_order")?,
            lambda: parse(path, take("lambda")?, "lambda")?,
            gt_max_r: parse(path, take("gt_max_r")?, "gt_max_r")?,
            prior: {
                let (line, v) = take("prior")?;
                v.parse()
                    .map_err(|_| Error::format(path, line, format!("bad prior {v:?}")))?
            },
            bos_eos: parse(path, take("bos_eos")?, "bos_eos")?,
        };
        if let Some((key, (line, _))) = fields.into_iter().next() {
            return Err(bad(line, format!("unknown field {key}")));
        }
        config
            .validate()
            .map_err(|e| Error::format(path, 1, e.to_string()))?;
        Ok(config)
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Config(format!("lambda must lie in [0, 1], got {lambda}")));
    }
    Ok(())
}

/// Good-Turing adjusted count `r* = (r+1) N_{r+1} / N_r` for `1 <= r < cutoff`;
/// any other `r`, or a missing `N_r` / `N_{r+1}`, keeps the raw count.
pub fn good_turing_adjust(count_of_counts: &BTreeMap<u64, u64>, r: u64, cutoff: u64) -> f64 {
    if r == 0 || r >= cutoff {
        return r as f64;
    }
    let nr = count_of_counts.get(&r).copied().unwrap_or(0);
    let next = count_of_counts.get(&(r + 1)).copied().unwrap_or(0);
    if nr == 0 || next == 0 {
        return r as f64;
    }
    (r + 1) as f64 * next as f64 / nr as f64
}

/// Precomputed adjusted counts for each order.
#[derive(Debug, Clone)]
struct GoodTuring {
    cutoff: u64,
    adjusted: Vec<Vec<f64>>,
}

impl GoodTuring {
    fn new(table: &CountTable, cutoff: u64) -> Self {
        let adjusted = (1..=table.order())
            .map(|n| {
                (0..cutoff)
                    .map(|r| good_turing_adjust(table.count_of_counts(n), r, cutoff))
                    .collect()
            })
            .collect();
        Self { cutoff, adjusted }
    }

    fn adjust(&self, n: usize, r: u64) -> f64 {
        if r < self.cutoff {
            self.adjusted[n - 1][r as usize]
        } else {
            r as f64
        }
    }
}

/// Which count table a conditional query reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Table {
    Phrase,
    Word,
}

#[derive(Debug, Clone)]
pub struct TrainedModel {
    config: ModelConfig,
    vocab: Vocab,
    phrase: CountTable,
    word: CountTable,
    phrase_gt: GoodTuring,
    word_gt: GoodTuring,
    unigram: Vec<f64>,
    word_mass: f64,
}

impl TrainedModel {
    /// Counts phrase and word n-grams of `corpus`.
    pub fn train(corpus: &Corpus, config: ModelConfig, threads: usize) -> Result<Self> {
        Self::train_with_budget(corpus, config, threads, None)
    }

    /// [`TrainedModel::train`] failing with a capacity error once either
    /// table would exceed `max_keys` distinct keys.
    pub fn train_with_budget(
        corpus: &Corpus,
        config: ModelConfig,
        threads: usize,
        max_keys: Option<usize>,
    ) -> Result<Self> {
        config.validate()?;
        let marked;
        let corpus = if config.bos_eos {
            marked = corpus.with_markers();
            &marked
        } else {
            corpus
        };
        let phrase = count_sentences(
            corpus.ids(),
            &CountConfig::new(config.order)
                .max_phrase_len(config.max_phrase_len)
                .max_keys(max_keys)
                .threads(threads),
        )?;
        let word = count_sentences(
            corpus.ids(),
            &CountConfig::new(config.word_order)
                .max_phrase_len(Some(1))
                .max_keys(max_keys)
                .threads(threads),
        )?;
        Self::from_parts(config, corpus.vocab().clone(), phrase, word)
    }

    pub fn from_parts(
        config: ModelConfig,
        vocab: Vocab,
        phrase: CountTable,
        word: CountTable,
    ) -> Result<Self> {
        config.validate()?;
        if phrase.order() < config.order || word.order() < config.word_order {
            return Err(Error::Config("count tables are shallower than the configured orders".into()));
        }
        let mut unigram = vec![0.0; vocab.len()];
        let total = word.total();
        let mut mass_count = 0u64;
        if total > 0 {
            for (id, p) in unigram.iter_mut().enumerate() {
                let c = word.count(&encode_key([&[id as u32][..]]));
                mass_count += c;
                *p = c as f64 / total as f64;
            }
        }
        let word_mass = if total > 0 {
            mass_count as f64 / total as f64
        } else {
            0.0
        };
        Ok(Self {
            phrase_gt: GoodTuring::new(&phrase, config.gt_max_r),
            word_gt: GoodTuring::new(&word, config.gt_max_r),
            config,
            vocab,
            phrase,
            word,
            unigram,
            word_mass,
        })
    }

    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        save_counts(&self.phrase, &self.vocab, dir.join(PHRASE_COUNTS))?;
        save_counts(&self.word, &self.vocab, dir.join(WORD_COUNTS))?;
        let meta = dir.join(META);
        fs::write(&meta, self.config.to_meta()).map_err(|e| Error::io(&meta, e))
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let meta = dir.join(META);
        let text = fs::read_to_string(&meta).map_err(|e| Error::io(&meta, e))?;
        let config = ModelConfig::from_meta(&text, &meta)?;
        let mut vocab = Vocab::new();
        let phrase = load_counts(dir.join(PHRASE_COUNTS), &mut vocab)?;
        let word = load_counts(dir.join(WORD_COUNTS), &mut vocab)?;
        Self::from_parts(config, vocab, phrase, word)
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn vocab(&self) -> &Vocab {
        &self.vocab
    }

    pub fn phrase_counts(&self) -> &CountTable {
        &self.phrase
    }

    pub fn word_counts(&self) -> &CountTable {
        &self.word
    }

    /// Scoring options taken from the model's own configuration.
    pub fn default_options(&self) -> ScoreOptions {
        ScoreOptions {
            order: self.config.order,
            smoothing: true,
            lambda: self.config.lambda,
            prior: self.config.prior,
            max_exact_len: ScoreOptions::DEFAULT_MAX_EXACT_LEN,
        }
    }

    pub fn scorer(&self, options: ScoreOptions) -> Result<Scorer<'_>> {
        check_lambda(options.lambda)?;
        if options.order == 0 {
            return Err(Error::Config("order must be at least 1".into()));
        }
        Ok(Scorer {
            model: self,
            options,
        })
    }

    fn default_scorer(&self) -> Scorer<'_> {
        Scorer {
            model: self,
            options: self.default_options(),
        }
    }

    /// Relative-frequency estimate of `phrase` after `context`.
    pub fn mle_prob(&self, phrase: &[&str], context: &[&[&str]]) -> Result<f64> {
        self.default_scorer().mle_prob(phrase, context)
    }

    /// Smoothed estimate with the model's λ.
    pub fn smoothed_prob(&self, phrase: &[&str], context: &[&[&str]]) -> Result<f64> {
        self.default_scorer().smoothed_prob(phrase, context)
    }

    /// Word unigram relative frequency; 0 for unknown words.
    pub fn word_unigram_prob(&self, word: &str) -> f64 {
        self.vocab.get(word).map_or(0.0, |id| self.unigram[id as usize])
    }

    /// Good-Turing adjusted count for phrase n-grams of order `n`.
    pub fn good_turing_adjusted_count(&self, n: usize, r: u64) -> f64 {
        if n == 0 || n > self.phrase.order() {
            return r as f64;
        }
        self.phrase_gt.adjust(n, r)
    }

    fn table(&self, which: Table) -> (&CountTable, &GoodTuring) {
        match which {
            Table::Phrase => (&self.phrase, &self.phrase_gt),
            Table::Word => (&self.word, &self.word_gt),
        }
    }

    pub(crate) fn unigram(&self, id: u32) -> f64 {
        self.unigram.get(id as usize).copied().unwrap_or(0.0)
    }
}

/// Per-query settings. Orders above the trained ones are rejected at use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreOptions {
    pub order: usize,
    pub smoothing: bool,
    pub lambda: f64,
    pub prior: PriorMode,
    /// Longest sentence the Max model searches exactly.
    pub max_exact_len: usize,
}

impl ScoreOptions {
    pub const DEFAULT_MAX_EXACT_LEN: usize = 64;
}

/// A model paired with query options; cheap to create, safe to share.
#[derive(Debug, Clone, Copy)]
pub struct Scorer<'m> {
    pub(crate) model: &'m TrainedModel,
    pub(crate) options: ScoreOptions,
}

impl<'m> Scorer<'m> {
    pub fn model(&self) -> &'m TrainedModel {
        self.model
    }

    pub fn options(&self) -> &ScoreOptions {
        &self.options
    }

    /// Vocabulary ids for a sentence, with boundary markers when the model
    /// was trained with them.
    pub fn encode(&self, sentence: &Sentence) -> Vec<u32> {
        let vocab = &self.model.vocab;
        if self.model.config.bos_eos {
            sentence
                .with_markers()
                .tokens()
                .iter()
                .map(|t| vocab.id_or_oov(t))
                .collect()
        } else {
            sentence.tokens().iter().map(|t| vocab.id_or_oov(t)).collect()
        }
    }

    fn encode_query(&self, phrase: &[&str], context: &[&[&str]]) -> Result<(Vec<u32>, Vec<u32>, Vec<u32>)> {
        if phrase.is_empty() || context.iter().any(|p| p.is_empty()) {
            return Err(Error::Config("phrases must be non-empty".into()));
        }
        if context.len() + 1 > self.model.phrase.order() {
            return Err(Error::Config(format!(
                "context of {} phrases exceeds model order {}",
                context.len(),
                self.model.phrase.order()
            )));
        }
        let vocab = &self.model.vocab;
        let ids = |p: &[&str]| p.iter().map(|w| vocab.id_or_oov(w)).collect::<Vec<u32>>();
        let mut ctx = Vec::new();
        for p in context {
            push_phrase(&mut ctx, &ids(p));
        }
        let words = ids(phrase);
        let mut full = ctx.clone();
        push_phrase(&mut full, &words);
        Ok((ctx, full, words))
    }

    pub fn mle_prob(&self, phrase: &[&str], context: &[&[&str]]) -> Result<f64> {
        let (ctx, full, _) = self.encode_query(phrase, context)?;
        self.mle(Table::Phrase, &ctx, &full)
    }

    pub fn smoothed_prob(&self, phrase: &[&str], context: &[&[&str]]) -> Result<f64> {
        let (ctx, full, words) = self.encode_query(phrase, context)?;
        Ok(self.smoothed(Table::Phrase, &ctx, &full, &words, context.len() + 1))
    }

    /// `C(context ⊕ phrase) / C(context)` with `C` the unigram total for an
    /// empty context.
    pub(crate) fn mle(&self, which: Table, ctx: &[u32], full: &[u32]) -> Result<f64> {
        let (table, _) = self.model.table(which);
        let denom = if ctx.is_empty() {
            table.total()
        } else {
            table.count(ctx)
        };
        if denom == 0 {
            return Err(Error::UnseenContext);
        }
        Ok(table.count(full) as f64 / denom as f64)
    }

    pub(crate) fn smoothed(&self, which: Table, ctx: &[u32], full: &[u32], words: &[u32], n: usize) -> f64 {
        let (table, gt) = self.model.table(which);
        let denom = if ctx.is_empty() {
            table.total()
        } else {
            table.count(ctx)
        };
        let discounted = if denom == 0 {
            0.0
        } else {
            gt.adjust(n, table.count(full)) / denom as f64
        };
        let product: f64 = words.iter().map(|&w| self.model.unigram(w)).product();
        let norm = self.model.word_mass.powi(words.len() as i32);
        let word_term = if norm > 0.0 { product / norm } else { 0.0 };
        let lambda = self.options.lambda;
        lambda * discounted + (1.0 - lambda) * word_term
    }

    /// Probability used inside sentence scoring; unseen contexts count as 0
    /// when smoothing is off.
    pub(crate) fn factor(&self, which: Table, ctx: &[u32], full: &[u32], words: &[u32], n: usize) -> f64 {
        if self.options.smoothing {
            self.smoothed(which, ctx, full, words, n)
        } else {
            self.mle(which, ctx, full).unwrap_or(0.0)
        }
    }

    /// Natural-log probability of a sentence under the word n-gram baseline,
    /// with contexts truncated at the sentence start.
    pub fn word_lm_logprob(&self, sentence: &Sentence) -> Result<f64> {
        let n = self.options.order;
        if n > self.model.word.order() {
            return Err(Error::Config(format!(
                "word order {n} exceeds the trained word order {}",
                self.model.word.order()
            )));
        }
        let words = self.encode(sentence);
        let mut ctx = Vec::with_capacity(n);
        let mut full = Vec::with_capacity(n);
        let mut total = 0.0;
        for i in 0..words.len() {
            let start = (i + 1).saturating_sub(n);
            ctx.clear();
            for w in &words[start..i] {
                push_phrase(&mut ctx, std::slice::from_ref(w));
            }
            full.clear();
            full.extend_from_slice(&ctx);
            push_phrase(&mut full, &words[i..=i]);
            let p = self.factor(Table::Word, &ctx, &full, &words[i..=i], i - start + 1);
            if p <= 0.0 {
                return Err(Error::ZeroProbability { position: Some(i) });
            }
            total += p.ln();
        }
        Ok(total)
    }
}
