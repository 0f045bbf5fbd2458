//! Hidden Markov model for part-of-speech tagging: tag sets, corpora, training, scoring and
//! the exhaustive decoder used as a reference.

mod brute;
mod corpus;
mod model;
mod tagset;
mod train;

pub use brute::{
    brute_force_best_sequence, brute_force_best_sequence_with_cap, decode_sequence_index,
    enumerate_sequence_probabilities, enumeration_cap, DEFAULT_ENUM_CAP, ENUM_CAP_ENV,
};
pub use corpus::TaggedCorpus;
pub use model::{sequence_log_probability, sequence_probability, HmmModel, Observation, ROW_TOL};
pub use tagset::{LexiconLookup, TagSet};
pub use train::{train_mle, train_mle_with_tags, UNKNOWN_WORD};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HmmError {
    #[error("tag set is empty")]
    NoTags,
    #[error("duplicate tag {0:?}")]
    DuplicateTag(String),
    #[error("unknown tag {0:?}")]
    UnknownTag(String),
    #[error("unknown word {0:?}")]
    UnknownWord(String),
    #[error("corpus has no sentences")]
    EmptyCorpus,
    #[error("sentence {0} is empty")]
    EmptySentence(usize),
    #[error("smoothing count must be finite and non-negative, got {0}")]
    BadAlpha(f64),
    #[error("tag {0:?} never occurs in the corpus; with alpha = 0 its rows would be all zero")]
    UnseenTag(String),
    #[error("{table} has shape {got}, expected {expected}")]
    Shape {
        table: &'static str,
        expected: String,
        got: String,
    },
    #[error("{table} row {row}: entry {value} outside [0, 1]")]
    Entry {
        table: &'static str,
        row: usize,
        value: f64,
    },
    #[error("{table} row {row} sums to {sum}")]
    RowSum {
        table: &'static str,
        row: usize,
        sum: f64,
    },
    #[error("observation is empty")]
    EmptyObservation,
    #[error("word index {index} out of range for vocabulary of {n}")]
    WordOutOfRange { index: usize, n: usize },
    #[error("tag index {index} out of range for {k} tags")]
    TagOutOfRange { index: usize, k: usize },
    #[error("{tags} tags for {words} words")]
    LengthMismatch { tags: usize, words: usize },
    #[error("enumeration of {size} sequences exceeds the cap of {cap}")]
    EnumerationCap { size: f64, cap: u64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("model file: {0}")]
    Json(String),
    #[error("{0}")]
    Io(String),
}
