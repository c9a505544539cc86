use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("document id `{0}` is already present in the corpus")]
    DuplicateId(String),

    #[error("document id must not be empty")]
    EmptyId,

    #[error("corpus file line {line}: {message}")]
    MalformedRecord { line: usize, message: String },

    #[error("{}:{line}: {message}", path.display())]
    MalformedLine {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("gold file {} has {gold} scores but {} has {input} pairs", gold_path.display(), input_path.display())]
    GoldLengthMismatch {
        input_path: PathBuf,
        gold_path: PathBuf,
        input: usize,
        gold: usize,
    },

    #[error("{inputs} input files but {golds} gold files")]
    GoldFileCount { inputs: usize, golds: usize },

    #[error("alpha must lie in [0, 1], got {0}")]
    InvalidAlpha(f64),

    #[error("threshold must lie in [0, 1], got {0}")]
    InvalidThreshold(f64),

    #[error(
        "corpus size {size} needs {needed} filler documents but only {available} are available"
    )]
    InsufficientFiller {
        size: usize,
        needed: usize,
        available: usize,
    },

    #[error("invalid corpus sizes: {0}")]
    InvalidSizes(String),

    #[error("pair `{0}` has no gold score")]
    MissingGold(String),

    #[error("{0} is empty")]
    Empty(&'static str),
}

impl Error {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
