//! Words, finite presentations and the built-in catalog.

mod catalog;
mod presentation;
mod word;

pub use catalog::{catalog, Catalog, CatalogItem};
pub use presentation::{parse_word, Presentation};
pub use word::{free_reduce, Letter, Word, WordDisplay};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpError {
    #[error("no image given for generator {0}")]
    MissingImage(usize),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator index {0} outside the alphabet")]
    UnknownGeneratorIndex(usize),
    #[error("invalid generator name `{0}`")]
    BadGeneratorName(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("cannot parse `{0}`")]
    BadToken(String),
    #[error("unknown catalog key `{key}`; valid keys: {valid}")]
    UnknownKey { key: String, valid: String },
    #[error("catalog key `{0}` has the wrong kind")]
    WrongKind(String),
    #[error("catalog line {line}: {message}")]
    Syntax { line: usize, message: String },
}
