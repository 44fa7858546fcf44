//! Reference implementations shared by the integration tests.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;

pub type Key = Vec<Vec<String>>;

/// Random sentences over `a`, `b`, ... with lengths in `1..=max_len`.
pub fn random_lines(rng: &mut StdRng, vocab: usize, sentences: usize, max_len: usize) -> Vec<String> {
    (0..sentences)
        .map(|_| {
            let len = rng.random_range(1..=max_len);
            (0..len)
                .map(|_| ((b'a' + rng.random_range(0..vocab) as u8) as char).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

/// The multiset of phrase n-grams of order `n` ending at word `d`
/// (1-based), built by the textbook recursion over the start `b` of the
/// last phrase.
pub fn q(words: &[&str], n: usize, d: usize) -> Vec<Key> {
    let span = |b: usize, d: usize| words[b - 1..d].iter().map(|w| w.to_string()).collect::<Vec<_>>();
    if n == 1 {
        return (1..=d).map(|b| vec![span(b, d)]).collect();
    }
    let mut out = Vec::new();
    for b in n..=d {
        for mut prefix in q(words, n - 1, b - 1) {
            prefix.push(span(b, d));
            out.push(prefix);
        }
    }
    out
}

/// All phrase n-grams of orders `1..=order`, via [`q`], sorted.
pub fn q_all(words: &[&str], order: usize, max_len: Option<usize>) -> Vec<Key> {
    let mut out = Vec::new();
    for n in 1..=order {
        for d in n..=words.len() {
            out.extend(q(words, n, d));
        }
    }
    if let Some(l) = max_len {
        out.retain(|k| k.iter().all(|p| p.len() <= l));
    }
    out.sort();
    out
}

/// All phrase n-grams by looping over boundary tuples `b_0 < ... < b_n`.
pub fn boundary_tuples(words: &[&str], order: usize, max_len: Option<usize>) -> Vec<Key> {
    fn extend(words: &[&str], cuts: &mut Vec<usize>, n: usize, max_len: Option<usize>, out: &mut Vec<Key>) {
        if cuts.len() == n + 1 {
            let key: Key = cuts
                .windows(2)
                .map(|w| words[w[0]..w[1]].iter().map(|s| s.to_string()).collect())
                .collect();
            if max_len.is_none_or(|l| key.iter().all(|p| p.len() <= l)) {
                out.push(key);
            }
            return;
        }
        let last = *cuts.last().unwrap();
        for next in last + 1..=words.len() {
            cuts.push(next);
            extend(words, cuts, n, max_len, out);
            cuts.pop();
        }
    }
    let mut out = Vec::new();
    for n in 1..=order {
        for start in 0..words.len() {
            extend(words, &mut vec![start], n, max_len, &mut out);
        }
    }
    out.sort();
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Relative difference, measured against at least 1 so log-probabilities
/// of certain events (log 1 = 0) compare absolutely.
pub fn relative_error(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Segmentation scores computed through the public string-level
/// probability API: (boundaries, log product of phrase factors).
pub fn segmentation_scores(scorer: &phraselm::Scorer<'_>, line: &str) -> Vec<(Vec<usize>, f64)> {
    let words: Vec<&str> = line.split_whitespace().collect();
    let opts = scorer.options();
    let max_len = scorer.model().config().max_phrase_len;
    let mut out = Vec::new();
    for seg in phraselm::enumerate_segmentations(words.len()) {
        let cuts: Vec<usize> = std::iter::once(0).chain(seg.boundaries().iter().copied()).collect();
        let phrases: Vec<&[&str]> = cuts.windows(2).map(|w| &words[w[0]..w[1]]).collect();
        if max_len.is_some_and(|l| phrases.iter().any(|p| p.len() > l)) {
            continue;
        }
        let mut score = 0.0;
        for j in 0..phrases.len() {
            let ctx = &phrases[j.saturating_sub(opts.order - 1)..j];
            let p = if opts.smoothing {
                scorer.smoothed_prob(phrases[j], ctx).unwrap()
            } else {
                scorer.mle_prob(phrases[j], ctx).unwrap_or(0.0)
            };
            score += p.ln();
        }
        out.push((seg.boundaries().to_vec(), score));
    }
    out
}

pub fn log_prior(mode: phraselm::PriorMode, len: usize) -> f64 {
    match mode {
        phraselm::PriorMode::Exact => -((len - 1) as f64) * std::f64::consts::LN_2,
        phraselm::PriorMode::HalfPerWord => -(len as f64) * std::f64::consts::LN_2,
        phraselm::PriorMode::None => 0.0,
    }
}

/// Sum-model log-probability by summing every segmentation, or `None`
/// when all have probability zero.
pub fn oracle_sum(scorer: &phraselm::Scorer<'_>, line: &str) -> Option<f64> {
    let scores = segmentation_scores(scorer, line);
    let total: f64 = scores.iter().map(|(_, s)| s.exp()).sum();
    let len = line.split_whitespace().count();
    (total > 0.0).then(|| total.ln() + log_prior(scorer.options().prior, len))
}

/// Max-model choice: best per-phrase score, scores within 1e-12 relative
/// tie, then fewer phrases, then earliest boundaries.
pub fn oracle_max(scorer: &phraselm::Scorer<'_>, line: &str) -> Option<(f64, Vec<usize>)> {
    let len = line.split_whitespace().count();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for (bounds, score) in segmentation_scores(scorer, line) {
        if score == f64::NEG_INFINITY {
            continue;
        }
        let better = match &best {
            None => true,
            Some((b, bb)) => {
                let (x, y) = (score / bounds.len() as f64, b / bb.len() as f64);
                let tie = (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
                if tie {
                    (bounds.len(), &bounds) < (bb.len(), bb)
                } else {
                    x > y
                }
            }
        };
        if better {
            best = Some((score, bounds));
        }
    }
    best.map(|(s, b)| (s + log_prior(scorer.options().prior, len), b))
}
