//! Normalization, tokenization, stop-word removal and Porter stemming.
//!
//! Expansion-side analysis never stems; stemming is applied only when
//! indexing or searching the target collection.

mod porter;
mod stoplist;
mod tokenize;

pub use porter::stem as porter_stem;
pub use stoplist::StopList;
pub use tokenize::{analyze, stem, tokenize, AnalyzerConfig, Token};

#[derive(Debug, thiserror::Error)]
pub enum TextError {
    #[error("invalid analyzer config: {0}")]
    InvalidConfig(String),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
