//! Sentence probability with the phrase segmentation as a hidden variable.
//!
//! The Sum model marginalizes over segmentations with a forward recursion;
//! the Max model picks one segmentation by per-phrase normalized score. Both
//! run over states made of the last `order - 1` phrase boundaries, which is
//! exactly the history a phrase n-gram factor looks at.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::corpus::Sentence;
use crate::counting::push_phrase;
use crate::error::{Error, Result};
use crate::model::{PriorMode, Scorer, Table};

/// Longest sentence [`Scorer::brute_force`] will enumerate.
pub const BRUTE_FORCE_MAX_LEN: usize = 14;

/// Phrase boundaries `k_1 < ... < k_J = I`; `k_0 = 0` is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segmentation {
    boundaries: Vec<usize>,
}

impl Segmentation {
    pub fn new(boundaries: Vec<usize>) -> Result<Self> {
        let ok = !boundaries.is_empty()
            && boundaries[0] > 0
            && boundaries.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(Error::Config(format!("invalid boundaries {boundaries:?}")));
        }
        Ok(Self { boundaries })
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    /// `J`.
    pub fn phrase_count(&self) -> usize {
        self.boundaries.len()
    }

    /// `I`.
    pub fn sentence_len(&self) -> usize {
        *self.boundaries.last().unwrap()
    }

    /// Half-open word spans of the phrases.
    pub fn spans(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        std::iter::once(0)
            .chain(self.boundaries.iter().copied())
            .zip(self.boundaries.iter().copied())
    }

    /// `a | b c | d` rendering over the given tokens.
    pub fn render<S: AsRef<str>>(&self, tokens: &[S]) -> String {
        self.spans()
            .map(|(b, e)| {
                tokens[b..e]
                    .iter()
                    .map(AsRef::as_ref)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

/// All `2^(len-1)` segmentations of a sentence of `len` words.
pub fn enumerate_segmentations(len: usize) -> impl Iterator<Item = Segmentation> {
    assert!((1..=63).contains(&len), "segmentation enumeration needs 1 <= len <= 63");
    (0u64..1 << (len - 1)).map(move |mask| {
        let mut boundaries: Vec<usize> = (1..len).filter(|p| mask >> (p - 1) & 1 == 1).collect();
        boundaries.push(len);
        Segmentation { boundaries }
    })
}

/// Prior probability of any one segmentation of a `len`-word sentence into
/// `phrases` phrases. Uniform, so `phrases` is ignored.
pub fn segmentation_prior(mode: PriorMode, len: usize, _phrases: usize) -> f64 {
    log_prior(mode, len).exp()
}

fn log_prior(mode: PriorMode, len: usize) -> f64 {
    match mode {
        PriorMode::Exact => -((len - 1) as f64) * std::f64::consts::LN_2,
        PriorMode::HalfPerWord => -(len as f64) * std::f64::consts::LN_2,
        PriorMode::None => 0.0,
    }
}

/// Running log-sum-exp.
#[derive(Debug, Clone, Copy)]
struct LogSum {
    max: f64,
    scaled: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }
}

impl LogSum {
    fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.scaled = self.scaled * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.scaled += (x - self.max).exp();
        }
    }

    fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

const TIE_TOLERANCE: f64 = 1e-12;

/// Score comparison that treats values within a relative 1e-12 as equal,
/// so mathematically equal scores summed in different orders still tie.
fn cmp_scores(a: f64, b: f64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let scale = a.abs().max(b.abs()).max(1.0);
    if a.is_finite() && b.is_finite() && (a - b).abs() <= TIE_TOLERANCE * scale {
        Ordering::Equal
    } else {
        a.partial_cmp(&b).unwrap_or(Ordering::Equal)
    }
}

/// True when (`score`, `path`) beats (`other`, `other_path`) for the same
/// phrase count: higher score, then lexicographically earlier boundaries.
fn beats(score: f64, path: &[u32], other: f64, other_path: &[u32]) -> bool {
    match cmp_scores(score, other) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => path < other_path,
    }
}

/// Candidate segmentation under the Max selection rule.
#[derive(Debug, Clone)]
struct MaxCandidate {
    /// Log product of phrase factors, prior excluded.
    score: f64,
    path: Vec<u32>,
}

impl MaxCandidate {
    fn normalized(&self) -> f64 {
        self.score / self.path.len() as f64
    }

    /// Selection order: higher per-phrase score, fewer phrases, earlier
    /// boundaries.
    fn beats(&self, other: &MaxCandidate) -> bool {
        match cmp_scores(self.normalized(), other.normalized()) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => (self.path.len(), &self.path) < (other.path.len(), &other.path),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Word n-gram baseline.
    Base,
    Sum,
    Max,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "base" | "word" => Ok(Mode::Base),
            "sum" => Ok(Mode::Sum),
            "max" => Ok(Mode::Max),
            _ => Err(Error::Config(format!("unknown mode {s:?} (base|word|sum|max)"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Base => "base",
            Mode::Sum => "sum",
            Mode::Max => "max",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredSentence {
    /// Natural-log probability (joint with the chosen segmentation for Max).
    pub log_prob: f64,
    pub segmentation: Option<Segmentation>,
    /// Perplexity normalizer: words for Base/Sum, phrases for Max.
    pub units: usize,
    pub ppl: f64,
}

impl ScoredSentence {
    fn new(log_prob: f64, units: usize, segmentation: Option<Segmentation>) -> Self {
        Self {
            log_prob,
            segmentation,
            units,
            ppl: (-log_prob / units as f64).exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusPpl {
    pub ppl: f64,
    pub log_prob: f64,
    pub units: usize,
    pub scored: usize,
    /// Indices of zero-probability sentences left out.
    pub skipped: Vec<usize>,
}

impl<'m> Scorer<'m> {
    fn check_phrase_order(&self) -> Result<()> {
        let trained = self.model.phrase_counts().order();
        if self.options.order > trained {
            return Err(Error::Config(format!(
                "phrase order {} exceeds the trained order {trained}",
                self.options.order
            )));
        }
        Ok(())
    }

    fn max_span(&self, len: usize) -> usize {
        self.model.config().max_phrase_len.map_or(len, |l| l.min(len))
    }

    /// Log factor of the phrase `words[last..end]` after the phrases
    /// delimited by `bounds` (whose final element is `last`).
    fn phrase_logprob(&self, words: &[u32], bounds: &[u32], end: usize, buf: &mut (Vec<u32>, Vec<u32>)) -> f64 {
        let (ctx, full) = buf;
        ctx.clear();
        for w in bounds.windows(2) {
            push_phrase(ctx, &words[w[0] as usize..w[1] as usize]);
        }
        let start = *bounds.last().unwrap() as usize;
        full.clear();
        full.extend_from_slice(ctx);
        push_phrase(full, &words[start..end]);
        let p = self.factor(Table::Phrase, ctx, full, &words[start..end], bounds.len());
        if p > 0.0 {
            p.ln()
        } else {
            f64::NEG_INFINITY
        }
    }

    fn advance(&self, bounds: &[u32], end: usize) -> Vec<u32> {
        let keep = self.options.order;
        let mut next = Vec::with_capacity(keep + 1);
        let skip = (bounds.len() + 1).saturating_sub(keep);
        next.extend_from_slice(&bounds[skip.min(bounds.len())..]);
        next.push(end as u32);
        next
    }

    /// Natural-log Sum-model probability of a sentence, prior included.
    pub fn sum_logprob(&self, sentence: &Sentence) -> Result<f64> {
        self.check_phrase_order()?;
        let words = self.encode(sentence);
        self.sum_ids(&words)
    }

    fn sum_ids(&self, words: &[u32]) -> Result<f64> {
        let len = words.len();
        let span = self.max_span(len);
        let mut buf = Default::default();
        let mut alpha: Vec<BTreeMap<Vec<u32>, LogSum>> = vec![BTreeMap::new(); len + 1];
        let mut start = LogSum::default();
        start.push(0.0);
        alpha[0].insert(vec![0], start);
        for pos in 0..len {
            let states = std::mem::take(&mut alpha[pos]);
            for (bounds, acc) in states {
                let base = acc.value();
                if base == f64::NEG_INFINITY {
                    continue;
                }
                for end in pos + 1..=(pos + span).min(len) {
                    let lp = self.phrase_logprob(words, &bounds, end, &mut buf);
                    if lp == f64::NEG_INFINITY {
                        continue;
                    }
                    alpha[end]
                        .entry(self.advance(&bounds, end))
                        .or_default()
                        .push(base + lp);
                }
            }
        }
        let mut total = LogSum::default();
        for acc in alpha[len].values() {
            total.push(acc.value());
        }
        let lp = total.value();
        if lp == f64::NEG_INFINITY {
            return Err(Error::ZeroProbability { position: None });
        }
        Ok(lp + log_prior(self.options.prior, len))
    }

    /// Max-model segmentation and its natural-log joint probability (prior
    /// included). The segmentation maximizes the per-phrase average log
    /// factor; the uniform prior does not take part in the choice.
    pub fn max_logprob(&self, sentence: &Sentence) -> Result<(f64, Segmentation)> {
        self.check_phrase_order()?;
        let words = self.encode(sentence);
        if words.len() > self.options.max_exact_len {
            return Err(Error::TooLong {
                len: words.len(),
                max: self.options.max_exact_len,
            });
        }
        self.max_ids(&words)
    }

    fn max_ids(&self, words: &[u32]) -> Result<(f64, Segmentation)> {
        let len = words.len();
        let span = self.max_span(len);
        let mut buf = Default::default();
        let mut layer: BTreeMap<Vec<u32>, MaxCandidate> = BTreeMap::new();
        layer.insert(
            vec![0],
            MaxCandidate {
                score: 0.0,
                path: Vec::new(),
            },
        );
        let mut best: Option<MaxCandidate> = None;
        while !layer.is_empty() {
            let mut next: BTreeMap<Vec<u32>, MaxCandidate> = BTreeMap::new();
            for (bounds, cand) in &layer {
                let pos = *bounds.last().unwrap() as usize;
                for end in pos + 1..=(pos + span).min(len) {
                    let lp = self.phrase_logprob(words, bounds, end, &mut buf);
                    if lp == f64::NEG_INFINITY {
                        continue;
                    }
                    let score = cand.score + lp;
                    let key = self.advance(bounds, end);
                    match next.get_mut(&key) {
                        Some(held) => {
                            let mut path = cand.path.clone();
                            path.push(end as u32);
                            if beats(score, &path, held.score, &held.path) {
                                *held = MaxCandidate { score, path };
                            }
                        }
                        None => {
                            let mut path = cand.path.clone();
                            path.push(end as u32);
                            next.insert(key, MaxCandidate { score, path });
                        }
                    }
                }
            }
            let mut finished: Option<MaxCandidate> = None;
            next.retain(|bounds, cand| {
                if *bounds.last().unwrap() as usize != len {
                    return true;
                }
                if finished
                    .as_ref()
                    .is_none_or(|f| beats(cand.score, &cand.path, f.score, &f.path))
                {
                    finished = Some(cand.clone());
                }
                false
            });
            if let Some(f) = finished {
                if best.as_ref().is_none_or(|b| f.beats(b)) {
                    best = Some(f);
                }
            }
            layer = next;
        }
        let best = best.ok_or(Error::ZeroProbability { position: None })?;
        let seg = Segmentation {
            boundaries: best.path.iter().map(|&b| b as usize).collect(),
        };
        Ok((best.score + log_prior(self.options.prior, len), seg))
    }

    /// Reference scorer that enumerates every segmentation.
    pub fn brute_force(&self, sentence: &Sentence, mode: Mode) -> Result<ScoredSentence> {
        self.check_phrase_order()?;
        let words = self.encode(sentence);
        let len = words.len();
        if len > BRUTE_FORCE_MAX_LEN {
            return Err(Error::TooLong {
                len,
                max: BRUTE_FORCE_MAX_LEN,
            });
        }
        let span = self.max_span(len);
        let history = self.options.order - 1;
        let mut buf = Default::default();
        let mut sum = LogSum::default();
        let mut best: Option<MaxCandidate> = None;
        for seg in enumerate_segmentations(len) {
            if seg.spans().any(|(b, e)| e - b > span) {
                continue;
            }
            let cuts: Vec<u32> = std::iter::once(0)
                .chain(seg.boundaries.iter().map(|&b| b as u32))
                .collect();
            let mut score = 0.0;
            for j in 1..cuts.len() {
                let from = (j - 1).saturating_sub(history);
                score += self.phrase_logprob(&words, &cuts[from..j], cuts[j] as usize, &mut buf);
            }
            if score == f64::NEG_INFINITY {
                continue;
            }
            sum.push(score);
            let cand = MaxCandidate {
                score,
                path: cuts[1..].to_vec(),
            };
            if best.as_ref().is_none_or(|b| cand.beats(b)) {
                best = Some(cand);
            }
        }
        let prior = log_prior(self.options.prior, len);
        match mode {
            Mode::Sum => {
                let lp = sum.value();
                if lp == f64::NEG_INFINITY {
                    return Err(Error::ZeroProbability { position: None });
                }
                Ok(ScoredSentence::new(lp + prior, len, None))
            }
            Mode::Max => {
                let best = best.ok_or(Error::ZeroProbability { position: None })?;
                let seg = Segmentation {
                    boundaries: best.path.iter().map(|&b| b as usize).collect(),
                };
                Ok(ScoredSentence::new(best.score + prior, seg.phrase_count(), Some(seg)))
            }
            Mode::Base => self.score(sentence, Mode::Base),
        }
    }

    pub fn score(&self, sentence: &Sentence, mode: Mode) -> Result<ScoredSentence> {
        match mode {
            Mode::Base => {
                let lp = self.word_lm_logprob(sentence)?;
                Ok(ScoredSentence::new(lp, self.encode(sentence).len(), None))
            }
            Mode::Sum => {
                let lp = self.sum_logprob(sentence)?;
                Ok(ScoredSentence::new(lp, self.encode(sentence).len(), None))
            }
            Mode::Max => {
                let (lp, seg) = self.max_logprob(sentence)?;
                Ok(ScoredSentence::new(lp, seg.phrase_count(), Some(seg)))
            }
        }
    }

    pub fn sentence_ppl(&self, sentence: &Sentence, mode: Mode) -> Result<f64> {
        Ok(self.score(sentence, mode)?.ppl)
    }

    /// Scores sentences in parallel on the current rayon pool; results keep
    /// input order.
    pub fn score_all(&self, sentences: &[Sentence], mode: Mode) -> Vec<Result<ScoredSentence>> {
        sentences.par_iter().map(|s| self.score(s, mode)).collect()
    }

    /// Aggregate perplexity: `exp(-Σ log P / Σ units)`, summed in sentence
    /// order.
    pub fn corpus_ppl(&self, sentences: &[Sentence], mode: Mode, skip_unscorable: bool) -> Result<CorpusPpl> {
        aggregate(self.score_all(sentences, mode), skip_unscorable)
    }
}

/// Folds per-sentence results into a corpus perplexity. Zero-probability
/// sentences are an error unless `skip_unscorable` is set; other errors
/// always propagate.
pub fn aggregate(results: Vec<Result<ScoredSentence>>, skip_unscorable: bool) -> Result<CorpusPpl> {
    let total = results.len();
    let mut log_prob = 0.0;
    let mut units = 0;
    let mut skipped = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(s) => {
                log_prob += s.log_prob;
                units += s.units;
            }
            Err(Error::ZeroProbability { .. }) => skipped.push(i),
            Err(e) => return Err(e),
        }
    }
    if (!skipped.is_empty() && !skip_unscorable) || units == 0 {
        return Err(Error::Unscorable {
            count: skipped.len(),
            sentences: skipped,
        });
    }
    Ok(CorpusPpl {
        ppl: (-log_prob / units as f64).exp(),
        log_prob,
        units,
        scored: total - skipped.len(),
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{tokenize, Corpus};
    use crate::model::{ModelConfig, ScoreOptions, TrainedModel};

    fn toy() -> TrainedModel {
        let corpus = Corpus::from_lines(["a b"], None);
        let config = ModelConfig {
            order: 2,
            word_order: 2,
            ..ModelConfig::default()
        };
        TrainedModel::train(&corpus, config, 1).unwrap()
    }

    fn unsmoothed(m: &TrainedModel) -> Scorer<'_> {
        m.scorer(ScoreOptions {
            smoothing: false,
            ..m.default_options()
        })
        .unwrap()
    }

    fn s(line: &str) -> Sentence {
        tokenize(line).unwrap()
    }

    #[test]
    fn segmentation_counts() {
        assert_eq!(enumerate_segmentations(1).count(), 1);
        let three: Vec<Vec<usize>> = enumerate_segmentations(3).map(|s| s.boundaries).collect();
        assert_eq!(three, vec![vec![3], vec![1, 3], vec![2, 3], vec![1, 2, 3]]);
        let seven: Vec<Segmentation> = enumerate_segmentations(7).collect();
        assert_eq!(seven.len(), 64);
        assert!(seven.contains(&Segmentation::new(vec![1, 3, 7]).unwrap()));
    }

    #[test]
    fn segmentation_rendering() {
        let seg = Segmentation::new(vec![1, 3, 7]).unwrap();
        let toks = ["John", "played", "basketball", "the", "day", "before", "yesterday"];
        assert_eq!(seg.render(&toks), "John | played basketball | the day before yesterday");
        assert_eq!(seg.phrase_count(), 3);
        assert_eq!(seg.sentence_len(), 7);
        assert!(Segmentation::new(vec![2, 2]).is_err());
        assert!(Segmentation::new(vec![0, 2]).is_err());
        assert!(Segmentation::new(vec![]).is_err());
    }

    #[test]
    fn priors() {
        assert_eq!(segmentation_prior(PriorMode::Exact, 2, 1), 0.5);
        assert_eq!(segmentation_prior(PriorMode::HalfPerWord, 2, 2), 0.25);
        assert_eq!(segmentation_prior(PriorMode::None, 9, 3), 1.0);
    }

    #[test]
    fn sum_on_toy() {
        let m = toy();
        let sc = unsmoothed(&m);
        let lp = sc.sum_logprob(&s("a b")).unwrap();
        assert!((lp - (1.0f64 / 3.0).ln()).abs() < 1e-12);
        let lp = sc.sum_logprob(&s("a")).unwrap();
        assert!((lp - (1.0f64 / 3.0).ln()).abs() < 1e-12);
        assert!((sc.sentence_ppl(&s("a b"), Mode::Sum).unwrap() - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn max_on_toy() {
        let m = toy();
        let sc = unsmoothed(&m);
        let (lp, seg) = sc.max_logprob(&s("a b")).unwrap();
        assert_eq!(seg.boundaries(), &[1, 2]);
        assert!((lp - (1.0f64 / 6.0).ln()).abs() < 1e-12);
        assert!((sc.sentence_ppl(&s("a b"), Mode::Max).unwrap() - 6f64.sqrt()).abs() < 1e-12);
        let (lp, seg) = sc.max_logprob(&s("a")).unwrap();
        assert_eq!(seg.boundaries(), &[1]);
        assert!((lp - (1.0f64 / 3.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn base_on_toy() {
        let m = toy();
        let sc = unsmoothed(&m);
        assert!((sc.sentence_ppl(&s("a b"), Mode::Base).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn unsmoothed_unseen_is_zero_probability() {
        let m = toy();
        let sc = unsmoothed(&m);
        assert!(matches!(sc.sum_logprob(&s("a z")), Err(Error::ZeroProbability { .. })));
        assert!(matches!(sc.max_logprob(&s("z")), Err(Error::ZeroProbability { .. })));
    }

    #[test]
    fn brute_force_bound() {
        let m = toy();
        let sc = unsmoothed(&m);
        let long = s(&["a"; 15].join(" "));
        assert!(matches!(sc.brute_force(&long, Mode::Sum), Err(Error::TooLong { len: 15, .. })));
        let ok = s(&["a"; 14].join(" "));
        let smoothed = m.scorer(m.default_options()).unwrap();
        assert!(smoothed.brute_force(&ok, Mode::Sum).is_ok());
    }

    #[test]
    fn exact_search_bound() {
        let m = toy();
        let sc = m
            .scorer(ScoreOptions {
                max_exact_len: 3,
                ..m.default_options()
            })
            .unwrap();
        assert!(matches!(sc.max_logprob(&s("a b a b")), Err(Error::TooLong { len: 4, max: 3 })));
        assert!(sc.max_logprob(&s("a b a")).is_ok());
    }

    #[test]
    fn order_above_trained_is_rejected() {
        let m = toy();
        let sc = m
            .scorer(ScoreOptions {
                order: 3,
                ..m.default_options()
            })
            .unwrap();
        assert!(matches!(sc.sum_logprob(&s("a")), Err(Error::Config(_))));
    }

    #[test]
    fn corpus_aggregation() {
        let m = toy();
        let sc = unsmoothed(&m);
        let one = sc.corpus_ppl(&[s("a b")], Mode::Sum, false).unwrap();
        assert!((one.ppl - sc.sentence_ppl(&s("a b"), Mode::Sum).unwrap()).abs() < 1e-12);
        let two = sc.corpus_ppl(&[s("a b"), s("a b")], Mode::Sum, false).unwrap();
        assert!((two.ppl - one.ppl).abs() < 1e-12);
        let bad = [s("a b"), s("z")];
        match sc.corpus_ppl(&bad, Mode::Sum, false) {
            Err(Error::Unscorable { count: 1, sentences }) => assert_eq!(sentences, vec![1]),
            other => panic!("{other:?}"),
        }
        let skipped = sc.corpus_ppl(&bad, Mode::Sum, true).unwrap();
        assert_eq!(skipped.skipped, vec![1]);
        assert_eq!(skipped.scored, 1);
        assert!((skipped.ppl - one.ppl).abs() < 1e-12);
    }

    #[test]
    fn log_sum_handles_extremes() {
        let mut acc = LogSum::default();
        assert_eq!(acc.value(), f64::NEG_INFINITY);
        acc.push(-1000.0);
        acc.push(-1000.0);
        assert!((acc.value() - (-1000.0 + 2f64.ln())).abs() < 1e-12);
        acc.push(f64::NEG_INFINITY);
        assert!((acc.value() - (-1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn score_ties() {
        assert_eq!(cmp_scores(-1.0, -1.0 - 1e-15), Ordering::Equal);
        assert_eq!(cmp_scores(-1.0, -1.1), Ordering::Greater);
        assert_eq!(cmp_scores(f64::NEG_INFINITY, -1.0), Ordering::Less);
        assert!(beats(-1.0, &[1, 3], -1.0, &[2, 3]));
        assert!(!beats(-1.0, &[2, 3], -1.0, &[1, 3]));
    }
}
