//! Corpus ingestion: whitespace tokenization, length filtering, vocabulary.

use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::vocab::Vocab;

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";

/// A pre-tokenized sentence. Never empty once built by [`tokenize`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sentence {
    tokens: Vec<String>,
}

impl Sentence {
    pub fn new(tokens: Vec<String>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::EmptyLine);
        }
        if tokens.iter().any(|t| t.is_empty() || t.chars().any(char::is_whitespace)) {
            return Err(Error::Config(
                "tokens must be non-empty and free of whitespace".into(),
            ));
        }
        Ok(Self { tokens })
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The sentence wrapped in `<s>` ... `</s>`.
    pub fn with_markers(&self) -> Sentence {
        let mut tokens = Vec::with_capacity(self.tokens.len() + 2);
        tokens.push(BOS.to_owned());
        tokens.extend(self.tokens.iter().cloned());
        tokens.push(EOS.to_owned());
        Sentence { tokens }
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tokens.join(" "))
    }
}

/// Splits a line on maximal runs of whitespace.
pub fn tokenize(line: &str) -> Result<Sentence> {
    let tokens: Vec<String> = line.split_whitespace().map(str::to_owned).collect();
    if tokens.is_empty() {
        return Err(Error::EmptyLine);
    }
    Ok(Sentence { tokens })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusStats {
    pub sentences: usize,
    pub words: usize,
    pub vocabulary: usize,
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sentences={} words={} vocabulary={}",
            self.sentences, self.words, self.vocabulary
        )
    }
}

/// An immutable collection of sentences with its interned vocabulary.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    sentences: Vec<Sentence>,
    ids: Vec<Vec<u32>>,
    vocab: Vocab,
    filtered: usize,
    blank_lines: usize,
}

impl Corpus {
    pub fn from_sentences(sentences: Vec<Sentence>) -> Self {
        let mut vocab = Vocab::new();
        let ids = sentences
            .iter()
            .map(|s| s.tokens().iter().map(|t| vocab.intern(t)).collect())
            .collect();
        Self {
            sentences,
            ids,
            vocab,
            filtered: 0,
            blank_lines: 0,
        }
    }

    /// Builds a corpus from raw lines, skipping blank ones and dropping
    /// sentences longer than `max_len`.
    pub fn from_lines<'a, I>(lines: I, max_len: Option<usize>) -> Self
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut sentences = Vec::new();
        let mut filtered = 0;
        let mut blank_lines = 0;
        for line in lines {
            match tokenize(line) {
                Ok(s) if max_len.is_some_and(|m| s.len() > m) => filtered += 1,
                Ok(s) => sentences.push(s),
                Err(_) => blank_lines += 1,
            }
        }
        let mut corpus = Self::from_sentences(sentences);
        corpus.filtered = filtered;
        corpus.blank_lines = blank_lines;
        corpus
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    /// Sentences as vocabulary ids, parallel to [`Corpus::sentences`].
    pub fn ids(&self) -> &[Vec<u32>] {
        &self.ids
    }

    pub fn vocab(&self) -> &Vocab {
        &self.vocab
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Sentences dropped by the length filter.
    pub fn filtered(&self) -> usize {
        self.filtered
    }

    /// Whitespace-only lines skipped during ingestion.
    pub fn blank_lines(&self) -> usize {
        self.blank_lines
    }

    pub fn stats(&self) -> CorpusStats {
        CorpusStats {
            sentences: self.sentences.len(),
            words: self.sentences.iter().map(Sentence::len).sum(),
            vocabulary: self.vocab.len(),
        }
    }

    /// Copy of the corpus with every sentence wrapped in boundary markers.
    pub fn with_markers(&self) -> Corpus {
        let mut corpus = Self::from_sentences(self.sentences.iter().map(Sentence::with_markers).collect());
        corpus.filtered = self.filtered;
        corpus.blank_lines = self.blank_lines;
        corpus
    }
}

/// Reads a one-sentence-per-line file, keeping sentences of at most
/// `max_len` tokens when a bound is given.
pub fn load_corpus(path: impl AsRef<Path>, max_len: Option<usize>) -> Result<Corpus> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let corpus = Corpus::from_lines(text.lines(), max_len);
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus {
            path: path.to_owned(),
        });
    }
    Ok(corpus)
}
