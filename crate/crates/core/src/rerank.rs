//! N-best lists and perplexity reranking.
//!
//! Wire format, one candidate per line:
//!
//! ```text
//! <source_id> ||| <hypothesis tokens> ||| <optional score>
//! ```

use std::fmt;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::corpus::{tokenize, Sentence};
use crate::error::{Error, Result};
use crate::model::Scorer;
use crate::segment::Mode;

pub const SEPARATOR: &str = " ||| ";

#[derive(Debug, Clone, PartialEq)]
pub struct NBestEntry {
    pub source_id: u64,
    pub hypothesis: Sentence,
    pub external_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NBestGroup {
    pub source_id: u64,
    pub candidates: Vec<NBestEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    EmptyList,
    /// A source id reappeared after another id; its lines were merged into
    /// the earlier group.
    NonContiguousGroup { source_id: u64, line: usize },
    /// No candidate could be scored; the first one was kept.
    AllUnscorable { source_id: u64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::EmptyList => f.write_str("n-best list is empty"),
            Warning::NonContiguousGroup { source_id, line } => {
                write!(f, "line {line}: source {source_id} is not contiguous; merged with its earlier lines")
            }
            Warning::AllUnscorable { source_id } => {
                write!(f, "source {source_id}: no candidate is scorable; keeping the first")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NBestList {
    pub groups: Vec<NBestGroup>,
    pub warnings: Vec<Warning>,
}

fn parse_entry(line: &str) -> std::result::Result<NBestEntry, String> {
    let fields: Vec<&str> = line.split(SEPARATOR).collect();
    if !(2..=3).contains(&fields.len()) {
        return Err(format!("expected 2 or 3 fields separated by {SEPARATOR:?}"));
    }
    let source_id = fields[0]
        .trim()
        .parse()
        .map_err(|_| format!("bad source id {:?}", fields[0]))?;
    let hypothesis = tokenize(fields[1]).map_err(|_| "empty hypothesis".to_owned())?;
    let external_score = match fields.get(2).map(|s| s.trim()) {
        None | Some("") => None,
        Some(s) => Some(s.parse().map_err(|_| format!("bad score {s:?}"))?),
    };
    Ok(NBestEntry {
        source_id,
        hypothesis,
        external_score,
    })
}

/// Parses n-best text; `path` only labels errors.
pub fn parse_nbest(text: &str, path: &Path) -> Result<NBestList> {
    let mut groups: Vec<NBestGroup> = Vec::new();
    let mut warnings = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let entry = parse_entry(line).map_err(|m| Error::format(path, i + 1, m))?;
        match groups.last_mut() {
            Some(g) if g.source_id == entry.source_id => g.candidates.push(entry),
            _ => {
                if let Some(g) = groups.iter_mut().find(|g| g.source_id == entry.source_id) {
                    warnings.push(Warning::NonContiguousGroup {
                        source_id: entry.source_id,
                        line: i + 1,
                    });
                    g.candidates.push(entry);
                } else {
                    groups.push(NBestGroup {
                        source_id: entry.source_id,
                        candidates: vec![entry],
                    });
                }
            }
        }
    }
    if groups.is_empty() {
        warnings.push(Warning::EmptyList);
    }
    Ok(NBestList { groups, warnings })
}

pub fn load_nbest(path: impl AsRef<Path>) -> Result<NBestList> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_nbest(&text, path)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub source_id: u64,
    /// Position of the chosen candidate within its group.
    pub index: usize,
    /// `None` when the chosen candidate is unscorable.
    pub ppl: Option<f64>,
    pub hypothesis: Sentence,
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ppl {
            Some(p) => write!(f, "{}\t{p:.6}\t{}", self.source_id, self.hypothesis),
            None => write!(f, "{}\tinf\t{}", self.source_id, self.hypothesis),
        }
    }
}

/// Index of the smallest perplexity; the earliest wins ties and unscorable
/// entries (`None`) lose to any scorable one.
pub fn select_min(ppls: &[Option<f64>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in ppls.iter().enumerate() {
        if let Some(p) = *p {
            if best.is_none_or(|(_, b)| p < b) {
                best = Some((i, p));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Picks one hypothesis per source by minimal sentence perplexity. With
/// `passthrough_first` the first candidate is kept unconditionally.
/// Selections come back ordered by source id.
pub fn rerank(
    scorer: &Scorer<'_>,
    groups: &[NBestGroup],
    mode: Mode,
    passthrough_first: bool,
) -> Result<(Vec<Selection>, Vec<Warning>)> {
    let scored: Vec<Result<(Selection, Option<Warning>)>> = groups
        .par_iter()
        .map(|g| {
            let mut ppls = Vec::with_capacity(g.candidates.len());
            for c in &g.candidates {
                match scorer.sentence_ppl(&c.hypothesis, mode) {
                    Ok(p) if p.is_finite() => ppls.push(Some(p)),
                    Ok(_) | Err(Error::ZeroProbability { .. }) | Err(Error::TooLong { .. }) => ppls.push(None),
                    Err(e) => return Err(e),
                }
                if passthrough_first {
                    break;
                }
            }
            let (index, warning) = match select_min(&ppls) {
                Some(i) if !passthrough_first => (i, None),
                _ if passthrough_first => (0, None),
                _ => (0, Some(Warning::AllUnscorable { source_id: g.source_id })),
            };
            Ok((
                Selection {
                    source_id: g.source_id,
                    index,
                    ppl: ppls[index],
                    hypothesis: g.candidates[index].hypothesis.clone(),
                },
                warning,
            ))
        })
        .collect();
    let mut selections = Vec::with_capacity(groups.len());
    let mut warnings = Vec::new();
    for r in scored {
        let (s, w) = r?;
        selections.push(s);
        warnings.extend(w);
    }
    selections.sort_by_key(|s| s.source_id);
    Ok((selections, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Corpus;
    use crate::model::{ModelConfig, ScoreOptions, TrainedModel};

    fn parse(text: &str) -> Result<NBestList> {
        parse_nbest(text, Path::new("nbest"))
    }

    #[test]
    fn groups_in_file_order() {
        let list = parse("1 ||| a b ||| -1.5\n1 ||| a\n1 ||| b\n0 ||| c\n0 ||| c c\n0 ||| d\n").unwrap();
        assert_eq!(list.groups.len(), 2);
        assert_eq!(list.groups[0].source_id, 1);
        assert_eq!(list.groups[0].candidates.len(), 3);
        assert_eq!(list.groups[0].candidates[0].external_score, Some(-1.5));
        assert_eq!(list.groups[1].candidates[1].hypothesis.to_string(), "c c");
        assert!(list.warnings.is_empty());
    }

    #[test]
    fn empty_file_warns() {
        let list = parse("").unwrap();
        assert!(list.groups.is_empty());
        assert_eq!(list.warnings, vec![Warning::EmptyList]);
    }

    #[test]
    fn malformed_lines() {
        for (text, line) in [
            ("0 || a\n", 1),
            ("0 ||| a\nx ||| b\n", 2),
            ("0 ||| a\n0 |||  \n", 2),
            ("0 ||| a ||| 1 ||| 2\n", 1),
            ("0 ||| a ||| nope\n", 1),
        ] {
            match parse(text) {
                Err(Error::Format { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn non_contiguous_groups_merge() {
        let list = parse("0 ||| a\n1 ||| b\n0 ||| c\n").unwrap();
        assert_eq!(list.groups.len(), 2);
        assert_eq!(list.groups[0].candidates.len(), 2);
        assert_eq!(list.warnings, vec![Warning::NonContiguousGroup { source_id: 0, line: 3 }]);
    }

    #[test]
    fn argmin_and_ties() {
        assert_eq!(select_min(&[Some(6.0), Some(2.4), Some(9.1)]), Some(1));
        assert_eq!(select_min(&[Some(2.4), Some(2.4)]), Some(0));
        assert_eq!(select_min(&[None, Some(9.0)]), Some(1));
        assert_eq!(select_min(&[None, None]), None);
    }

    fn toy() -> TrainedModel {
        let corpus = Corpus::from_lines(["a b"], None);
        let config = ModelConfig {
            order: 2,
            word_order: 2,
            ..ModelConfig::default()
        };
        TrainedModel::train(&corpus, config, 1).unwrap()
    }

    #[test]
    fn toy_rerank_prefers_seen_order() {
        let m = toy();
        let list = parse("0 ||| b a\n0 ||| a b\n").unwrap();
        for smoothing in [true, false] {
            let sc = m
                .scorer(ScoreOptions {
                    smoothing,
                    ..m.default_options()
                })
                .unwrap();
            let (sel, _) = rerank(&sc, &list.groups, Mode::Sum, false).unwrap();
            assert_eq!(sel[0].hypothesis.to_string(), "a b");
            assert_eq!(sel[0].index, 1);
        }
    }

    #[test]
    fn passthrough_and_fallback() {
        let m = toy();
        let sc = m
            .scorer(ScoreOptions {
                smoothing: false,
                ..m.default_options()
            })
            .unwrap();
        let list = parse("3 ||| z ||| 0\n3 ||| y\n1 ||| b a\n1 ||| a b\n").unwrap();
        let (sel, warnings) = rerank(&sc, &list.groups, Mode::Max, false).unwrap();
        assert_eq!(sel.iter().map(|s| s.source_id).collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(sel[0].hypothesis.to_string(), "a b");
        assert_eq!(sel[1].hypothesis.to_string(), "z");
        assert_eq!(sel[1].to_string(), "3\tinf\tz");
        assert_eq!(warnings, vec![Warning::AllUnscorable { source_id: 3 }]);
        let (sel, warnings) = rerank(&sc, &list.groups, Mode::Sum, true).unwrap();
        assert_eq!(sel[0].hypothesis.to_string(), "b a");
        assert!(warnings.is_empty());
    }
}
