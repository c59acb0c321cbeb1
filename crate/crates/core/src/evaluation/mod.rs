//! Effectiveness metrics over run files and relevance judgments.
//!
//! Conventions follow the common TREC evaluation tool: run entries are
//! ordered by score with ties broken by document id descending, unjudged
//! documents are nonrelevant for precision and ignored by bpref, and P@k
//! always divides by k.

mod metrics;
mod qrels;
mod report;

pub use metrics::{
    average_precision, bpref, evaluation_order, f_measure, gmap, interpolated_pr, mean_ap,
    precision_at_k, relative_improvement, GMAP_EPSILON, RECALL_LEVELS,
};
pub use qrels::{Judgments, Qrels, TopicSet};
pub use report::{evaluate, AggregateMetrics, MetricsReport, QueryMetrics, PRECISION_CUTOFFS};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("query {0} has no relevant documents")]
    NoRelevant(String),
    #[error("no query could be evaluated")]
    NoQueries,
    #[error("baseline must be positive")]
    ZeroBaseline,
    #[error("second judgment for query {query_id}, document {doc_id}")]
    DuplicateJudgment { query_id: String, doc_id: String },
    #[error("document {doc_id} retrieved twice for query {query_id}")]
    DuplicateDocument { query_id: String, doc_id: String },
    #[error("duplicate topic {0}")]
    DuplicateTopic(String),
    #[error("{0}")]
    InvalidArgument(String),
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

impl EvalError {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
