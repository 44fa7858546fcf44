use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line has no tokens")]
    EmptyLine,

    #[error("no sentences left in {} after filtering", path.display())]
    EmptyCorpus { path: PathBuf },

    #[error("{}:{line}: {message}", path.display())]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("key budget of {limit} distinct phrase n-grams exceeded at sentence {sentence}")]
    Capacity { limit: usize, sentence: usize },

    #[error("context has never been observed")]
    UnseenContext,

    #[error("zero probability{}", match .position { Some(p) => format!(" at word {p}"), None => String::new() })]
    ZeroProbability { position: Option<usize> },

    #[error("{count} sentence(s) have zero probability (first: {})", .sentences.first().map(|s| s.to_string()).unwrap_or_default())]
    Unscorable { count: usize, sentences: Vec<usize> },

    #[error("sentence of {len} words exceeds the exact-search bound of {max}")]
    TooLong { len: usize, max: usize },

    #[error("{hypotheses} hypotheses but {references} references")]
    LengthMismatch { hypotheses: usize, references: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("{0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::ZeroProbability { .. } | Error::Unscorable { .. } | Error::UnseenContext => 3,
            _ => 2,
        }
    }
}
