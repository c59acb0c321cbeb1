use std::collections::HashSet;

use super::{EngineId, Snapshot, WebDocument, WebSourceError};

/// Top `n_docs` documents of each engine for one query, concatenated in
/// engine order then rank order. A page returned by several engines appears
/// once per engine unless `dedup` is set, in which case only its first
/// occurrence is kept.
pub fn build_corpus<'a>(
    snapshot: &'a Snapshot,
    query_id: &str,
    engines: &[EngineId],
    n_docs: usize,
    dedup: bool,
) -> Result<Vec<&'a WebDocument>, WebSourceError> {
    if n_docs == 0 {
        return Err(WebSourceError::InvalidArgument(
            "n_docs must be at least 1".into(),
        ));
    }
    let mut out = Vec::new();
    let mut seen_urls = HashSet::new();
    for engine in engines {
        let docs: Vec<&WebDocument> = snapshot.documents(query_id, engine).take(n_docs).collect();
        if docs.is_empty() {
            return Err(WebSourceError::MissingEngineData {
                query_id: query_id.to_string(),
                engine: engine.clone(),
            });
        }
        for d in docs {
            if !dedup || seen_urls.insert(d.entry.url.as_str()) {
                out.push(d);
            }
        }
    }
    Ok(out)
}
