use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::expansion::ExpandedQuery;
use crate::textproc::{analyze, stem, tokenize, AnalyzerConfig, Token};

use super::{InvertedIndex, RetrievalError, WeightingModel};

/// Maximum number of documents returned per query.
pub const DEFAULT_R_MAX: usize = 1000;

/// An index-side term with its query weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedQueryTerm {
    pub term: Token,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub doc_id: String,
    pub rank: u32,
    pub score: f64,
}

/// Documents ranked for one query: score descending, ties by document id
/// ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub query_id: String,
    pub entries: Vec<RankedEntry>,
}

impl RankedList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.doc_id.as_str())
    }
}

/// Maps unstemmed weighted terms into index space. Terms are stemmed when
/// the analyzer stems; terms that collapse to the same stem add their
/// weights. First-occurrence order is kept.
pub fn weighted_query<'a, I>(
    terms: I,
    analyzer: &AnalyzerConfig,
) -> Result<Vec<WeightedQueryTerm>, RetrievalError>
where
    I: IntoIterator<Item = (&'a Token, f64)>,
{
    let mut out: Vec<WeightedQueryTerm> = Vec::new();
    let mut slot: HashMap<Token, usize> = HashMap::new();
    for (term, weight) in terms {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(RetrievalError::InvalidQuery(format!(
                "term {term} has weight {weight}"
            )));
        }
        let term = if analyzer.stemming {
            stem(term)
        } else {
            term.clone()
        };
        match slot.get(&term) {
            Some(&i) => out[i].weight += weight,
            None => {
                slot.insert(term.clone(), out.len());
                out.push(WeightedQueryTerm { term, weight });
            }
        }
    }
    Ok(out)
}

/// Baseline query from a topic title: every analyzed term with weight 1,
/// repeated terms accumulate.
pub fn query_from_title(title: &str, analyzer: &AnalyzerConfig) -> Vec<WeightedQueryTerm> {
    let raw = tokenize(
        title,
        &AnalyzerConfig {
            stemming: false,
            ..analyzer.clone()
        },
    );
    debug_assert_eq!(raw.len(), analyze(title, analyzer).len());
    weighted_query(raw.iter().map(|t| (t, 1.0)), analyzer).expect("unit weights are valid")
}

/// Index-side query for an expanded query with expansion weight `beta`.
pub fn query_from_expansion(
    expanded: &ExpandedQuery,
    beta: f64,
    analyzer: &AnalyzerConfig,
) -> Result<Vec<WeightedQueryTerm>, RetrievalError> {
    let terms = expanded.weighted_terms(beta);
    weighted_query(terms.iter().map(|(t, w)| (t, *w)), analyzer)
}

/// Scores one document exhaustively: the weighted sum of the model's score
/// over query terms present in the document.
pub fn score_document(
    query: &[WeightedQueryTerm],
    doc: usize,
    index: &InvertedIndex,
    model: &dyn WeightingModel,
) -> f64 {
    let coll = index.collection_stats();
    let len = f64::from(index.doc_length(doc));
    query
        .iter()
        .map(|q| {
            let tf = index.tf(q.term.as_str(), doc);
            if tf == 0 {
                0.0
            } else {
                q.weight
                    * model.score(
                        f64::from(tf),
                        len,
                        &index.term_stats(q.term.as_str()),
                        &coll,
                    )
            }
        })
        .sum()
}

/// Ranks every document that matches at least one query term and keeps the
/// top `r_max`.
pub fn search(
    query_id: &str,
    query: &[WeightedQueryTerm],
    index: &InvertedIndex,
    model: &dyn WeightingModel,
    r_max: usize,
) -> RankedList {
    let coll = index.collection_stats();
    let mut acc: HashMap<u32, f64> = HashMap::new();
    for q in query {
        let postings = index.postings(q.term.as_str());
        if postings.is_empty() {
            continue;
        }
        let stats = index.term_stats(q.term.as_str());
        for &(doc, tf) in postings {
            let len = f64::from(index.doc_length(doc as usize));
            *acc.entry(doc).or_default() +=
                q.weight * model.score(f64::from(tf), len, &stats, &coll);
        }
    }
    let mut scored: Vec<(u32, f64)> = acc.into_iter().collect();
    scored.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then_with(|| index.doc_id(a.0 as usize).cmp(index.doc_id(b.0 as usize)))
    });
    scored.truncate(r_max);
    RankedList {
        query_id: query_id.to_string(),
        entries: scored
            .into_iter()
            .enumerate()
            .map(|(i, (doc, score))| RankedEntry {
                doc_id: index.doc_id(doc as usize).to_string(),
                rank: i as u32 + 1,
                score,
            })
            .collect(),
    }
}
