//! Expansion-term scoring.
//!
//! Three stages narrow the vocabulary of the pseudo-relevant corpus:
//!
//! 1. [`rank_by_tf_itf`] keeps the `M` terms with the highest
//!    `f · ln(T / f)`, where `f` is the term's collection frequency and `T`
//!    the collection size in tokens.
//! 2. [`knn_select`] walks those candidates by cosine similarity of their
//!    document-weight vectors (`w(t, j) = tf(t, j) · ln(T / |DT_j|)`) and
//!    keeps `k` of them.
//! 3. [`correlation_score`] reweights the survivors by their mean dot
//!    product with the query terms' weight vectors; the top `n` become the
//!    expansion.
//!
//! [`expand_query`] chains the stages for one query.

mod corpus;
mod knn;
mod pipeline;
mod weights;

pub use corpus::{build_stats, Corpus};
pub use knn::{knn_select, KnnParams};
pub use pipeline::{expand_query, rerank_by_correlation, ExpandedQuery, ExpansionConfig, Query};
pub use weights::{
    by_score_then_term, correlation_score, cosine_of, cosine_sim, doc_weight, rank_by_tf_itf,
    rank_by_tf_itf_in_base, sparse_dot, term_correlation, tf_itf, tf_itf_in_base, weight_vector,
    ScoredTerm, Stage,
};

use crate::websource::WebSourceError;

#[derive(Debug, thiserror::Error)]
pub enum ExpansionError {
    #[error("no usable text in the pseudo-relevant documents")]
    EmptyCorpus,
    #[error("term {0:?} does not occur in the corpus")]
    UnknownTerm(String),
    #[error("document index {0} is not in the corpus")]
    UnknownDocument(usize),
    #[error("term {0:?} has an all-zero weight vector")]
    ZeroVector(String),
    #[error("{available} candidate terms available, kNN selection needs {required}")]
    InsufficientTerms { available: usize, required: usize },
    #[error("query {0} has no terms after analysis")]
    EmptyQuery(String),
    #[error("invalid expansion config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    WebSource(#[from] WebSourceError),
}
