use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: malformed lexicon entry {text:?}")]
    MalformedLexiconLine { line: usize, text: String },
    #[error("line {line}: unknown lexicon category {category:?}")]
    UnknownCategory { line: usize, category: String },
    #[error("{word:?} is listed under both {first} and {second}")]
    DuplicateEntry {
        word: String,
        first: String,
        second: String,
    },
    #[error("reversal term {0:?} is not a performance indicator in the lexicon")]
    ReversalNotIndicator(String),

    #[error("empty sentence")]
    EmptySentence,
    #[error("token {index}: malformed tagged token {token:?} (expected surface_TAG)")]
    MalformedToken { index: usize, token: String },
    #[error("token {index}: unknown POS tag {tag:?}")]
    UnknownPosTag { index: usize, tag: String },
    #[error("POS tagger unavailable: {0}")]
    TaggerUnavailable(String),

    #[error("grammar rule {label:?}, offset {offset}: {message}")]
    GrammarSyntax {
        label: String,
        offset: usize,
        message: String,
    },
    #[error("grammar rule {label:?} references undefined label {reference:?}")]
    UndefinedLabel { label: String, reference: String },

    #[error("unknown semantic tag {0:?}")]
    UnknownTag(String),
    #[error("unknown class label {0:?}")]
    UnknownLabel(String),

    #[error("transaction list is empty")]
    NoTransactions,
    #[error("{name} must lie in (0, 100], got {value}")]
    PercentOutOfRange { name: &'static str, value: f64 },
    #[error("line {line}: {message}")]
    RuleParse { line: usize, message: String },

    #[error("line {line}: {message}")]
    CorpusParse { line: usize, message: String },
    #[error("unsupported encoding {0:?}")]
    UnsupportedEncoding(String),
    #[error("fold count must be at least 2, got {0}")]
    TooFewFolds(usize),
    #[error("class {label} has {count} examples, fewer than the {folds} folds requested")]
    ClassTooSmall {
        label: String,
        count: usize,
        folds: usize,
    },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("prediction count {predicted} does not match gold count {gold}")]
    LengthMismatch { gold: usize, predicted: usize },

    #[error("model format: {0}")]
    ModelFormat(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
