//! Phrase-based n-gram language models.
//!
//! A sentence is scored through a hidden segmentation into phrases, each
//! phrase predicted from the preceding `n - 1` phrases. The crate covers
//! corpus loading, phrase n-gram counting, smoothed estimation, Sum and Max
//! inference, perplexity, n-best reranking and BLEU.

pub mod bleu;
pub mod cli;
pub mod corpus;
pub mod counting;
pub mod error;
pub mod model;
pub mod rerank;
pub mod segment;
pub mod vocab;

pub use bleu::{bleu, BleuReport};
pub use corpus::{load_corpus, tokenize, Corpus, CorpusStats, Sentence};
pub use counting::{accumulate_counts, enumerate_phrase_ngrams, CountConfig, CountTable};
pub use error::{Error, Result};
pub use model::{ModelConfig, PriorMode, ScoreOptions, Scorer, TrainedModel};
pub use rerank::{load_nbest, rerank, NBestEntry, NBestGroup, Selection};
pub use segment::{enumerate_segmentations, segmentation_prior, CorpusPpl, Mode, ScoredSentence, Segmentation};
pub use vocab::Vocab;
