//! Inverted-index retrieval over the target collection with weighted-term
//! queries, BM25 and TF-IDF scoring, and run-file I/O.

mod collection;
mod index;
mod model;
mod run;
mod search;

use std::fmt;

pub use collection::{load_collection, parse_jsonl, parse_trec, CollectionDoc};
pub use index::{build_index, CollectionStats, InvertedIndex, TermStats};
pub use model::{model_by_name, Bm25, TfIdf, WeightingModel};
pub use run::{parse_run, read_run, write_run, write_run_file};
pub use search::{
    query_from_expansion, query_from_title, score_document, search, weighted_query, RankedEntry,
    RankedList, WeightedQueryTerm, DEFAULT_R_MAX,
};

#[derive(Debug, thiserror::Error)]
pub enum RetrievalError {
    #[error("duplicate document id {0:?}")]
    DuplicateDocId(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("{0}")]
    InvalidModel(String),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl RetrievalError {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

impl fmt::Display for WeightedQueryTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.term, self.weight)
    }
}
