//! Acquisition of pseudo-relevant web documents.
//!
//! Search results come from a [`SerpProvider`] (a stored snapshot, a plain
//! URL list, or a live client supplied by the caller), pass through the
//! [`Blocklist`], are fetched with a [`PageFetcher`] and reduced to their
//! content blocks by [`extract_text`]. Everything is persisted as a
//! [`Snapshot`] so that later stages never touch the network.

mod blocklist;
mod corpus;
mod extract;
mod fetch;
mod provider;
mod snapshot;

use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

pub use blocklist::{filter_urls, Blocklist};
pub use corpus::build_corpus;
pub use extract::extract_text;
pub use fetch::{
    fetch_documents, DirectoryFetcher, FetchOutcome, FetchRequest, FetchedPage, PageFetcher,
};
pub use provider::{acquire_serp, SerpProvider, SnapshotProvider, UrlListProvider};
pub use snapshot::{Snapshot, SnapshotMeta};

/// Identifier of a search engine, e.g. `google`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct EngineId(String);

impl EngineId {
    pub fn new(id: impl Into<String>) -> Result<Self, WebSourceError> {
        let id = id.into();
        if id.trim().is_empty() {
            return Err(WebSourceError::InvalidArgument(
                "engine id must be non-empty".into(),
            ));
        }
        Ok(EngineId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The three engines used when nothing else is configured.
    pub fn defaults() -> Vec<EngineId> {
        ["google", "bing", "duckduckgo"]
            .into_iter()
            .map(|s| EngineId(s.to_string()))
            .collect()
    }
}

impl TryFrom<String> for EngineId {
    type Error = WebSourceError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        EngineId::new(value)
    }
}

impl From<EngineId> for String {
    fn from(value: EngineId) -> Self {
        value.0
    }
}

impl fmt::Display for EngineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Short label for an engine combination: upper-cased initials followed by
/// `QE`, so `[google, bing, duckduckgo]` becomes `GBDQE`.
pub fn variant_label(engines: &[EngineId]) -> String {
    let mut label: String = engines
        .iter()
        .filter_map(|e| e.as_str().chars().next())
        .flat_map(char::to_uppercase)
        .collect();
    label.push_str("QE");
    label
}

/// One ranked search result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerpEntry {
    pub query_id: String,
    pub engine: EngineId,
    /// 1-based.
    pub rank: u32,
    pub url: String,
}

/// A fetched search result reduced to its text content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WebDocument {
    pub entry: SerpEntry,
    pub raw_html: Option<String>,
    pub extracted_text: String,
    pub fetched_at: DateTime<Utc>,
}

#[derive(Debug, thiserror::Error)]
pub enum WebSourceError {
    #[error("provider unreachable: {0}")]
    ProviderUnreachable(String),
    #[error("no results for query {query_id} on engine {engine}")]
    EmptyResult { query_id: String, engine: EngineId },
    #[error("content is not decodable text")]
    UndecodableContent,
    #[error("snapshot has no documents for query {query_id} on engine {engine}")]
    MissingEngineData { query_id: String, engine: EngineId },
    #[error("fetching {url}: {message}")]
    Fetch { url: String, message: String },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl WebSourceError {
    pub(crate) fn io(path: impl fmt::Display, source: std::io::Error) -> Self {
        WebSourceError::Io {
            path: path.to_string(),
            source,
        }
    }
}
