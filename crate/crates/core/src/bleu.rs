//! Corpus-level BLEU-4 against a single reference per hypothesis.

use std::collections::HashMap;
use std::fmt;

use crate::corpus::Sentence;
use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct BleuReport {
    pub bleu: f64,
    /// Clipped n-gram precisions for n = 1..=4.
    pub precisions: [f64; MAX_ORDER],
    pub brevity_penalty: f64,
    pub hypothesis_len: usize,
    pub reference_len: usize,
}

impl fmt::Display for BleuReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BLEU = {:.4}", self.bleu)?;
        for (n, p) in self.precisions.iter().enumerate() {
            write!(f, "\tp{}={p:.4}", n + 1)?;
        }
        write!(
            f,
            "\tBP={:.4}\thyp_len={}\tref_len={}",
            self.brevity_penalty, self.hypothesis_len, self.reference_len
        )
    }
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], u64> {
    let mut counts = HashMap::new();
    for g in tokens.windows(n) {
        *counts.entry(g).or_insert(0) += 1;
    }
    counts
}

pub fn bleu(hypotheses: &[Sentence], references: &[Sentence]) -> Result<BleuReport> {
    if hypotheses.len() != references.len() {
        return Err(Error::LengthMismatch {
            hypotheses: hypotheses.len(),
            references: references.len(),
        });
    }
    let mut matched = [0u64; MAX_ORDER];
    let mut possible = [0u64; MAX_ORDER];
    let (mut c, mut r) = (0, 0);
    for (hyp, reference) in hypotheses.iter().zip(references) {
        let (h, rf) = (hyp.tokens(), reference.tokens());
        c += h.len();
        r += rf.len();
        for n in 1..=MAX_ORDER {
            let ref_counts = ngram_counts(rf, n);
            for (g, k) in ngram_counts(h, n) {
                matched[n - 1] += k.min(ref_counts.get(g).copied().unwrap_or(0));
                possible[n - 1] += k;
            }
        }
    }
    if c == 0 {
        return Err(Error::EmptyInput);
    }
    let mut precisions = [0.0; MAX_ORDER];
    for n in 0..MAX_ORDER {
        if possible[n] > 0 {
            precisions[n] = matched[n] as f64 / possible[n] as f64;
        }
    }
    let brevity_penalty = if c < r {
        (1.0 - r as f64 / c as f64).exp()
    } else {
        1.0
    };
    let bleu = if matched.iter().all(|&m| m > 0) {
        let mean_log = precisions.iter().map(|p| p.ln()).sum::<f64>() / MAX_ORDER as f64;
        brevity_penalty * mean_log.exp()
    } else {
        0.0
    };
    Ok(BleuReport {
        bleu,
        precisions,
        brevity_penalty,
        hypothesis_len: c,
        reference_len: r,
    })
}
