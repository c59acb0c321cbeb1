use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::textproc::{analyze, AnalyzerConfig};

use super::RetrievalError;

/// Unigram inverted index over the target collection. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvertedIndex {
    doc_ids: Vec<String>,
    doc_lengths: Vec<u32>,
    /// term -> (doc index, tf), ascending by doc index
    postings: BTreeMap<String, Vec<(u32, u32)>>,
    total_terms: u64,
}

/// Per-term statistics handed to a weighting model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermStats {
    pub doc_freq: u64,
    pub collection_freq: u64,
}

/// Collection-wide statistics handed to a weighting model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectionStats {
    pub doc_count: u64,
    pub avg_doc_length: f64,
    pub total_terms: u64,
}

impl InvertedIndex {
    pub fn doc_count(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn doc_id(&self, doc: usize) -> &str {
        &self.doc_ids[doc]
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn doc_length(&self, doc: usize) -> u32 {
        self.doc_lengths[doc]
    }

    pub fn avg_doc_length(&self) -> f64 {
        if self.doc_ids.is_empty() {
            0.0
        } else {
            self.total_terms as f64 / self.doc_ids.len() as f64
        }
    }

    pub fn total_terms(&self) -> u64 {
        self.total_terms
    }

    pub fn doc_freq(&self, term: &str) -> usize {
        self.postings.get(term).map_or(0, Vec::len)
    }

    pub fn postings(&self, term: &str) -> &[(u32, u32)] {
        self.postings.get(term).map_or(&[], Vec::as_slice)
    }

    pub fn term_count(&self) -> usize {
        self.postings.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    /// tf of `term` in document `doc`.
    pub fn tf(&self, term: &str, doc: usize) -> u32 {
        let postings = self.postings(term);
        postings
            .binary_search_by_key(&(doc as u32), |&(d, _)| d)
            .map_or(0, |i| postings[i].1)
    }

    pub fn term_stats(&self, term: &str) -> TermStats {
        let postings = self.postings(term);
        TermStats {
            doc_freq: postings.len() as u64,
            collection_freq: postings.iter().map(|&(_, tf)| u64::from(tf)).sum(),
        }
    }

    pub fn collection_stats(&self) -> CollectionStats {
        CollectionStats {
            doc_count: self.doc_ids.len() as u64,
            avg_doc_length: self.avg_doc_length(),
            total_terms: self.total_terms,
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), RetrievalError> {
        let json = serde_json::to_string(self).expect("index serializes");
        std::fs::write(path, json).map_err(|e| RetrievalError::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self, RetrievalError> {
        let text = std::fs::read_to_string(path).map_err(|e| RetrievalError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| RetrievalError::Parse {
            path: path.display().to_string(),
            line: e.line(),
            message: e.to_string(),
        })
    }
}

/// Analyzes every document (tokenize, drop stop words, stem) and builds
/// postings. Document order is preserved.
pub fn build_index<I, S, T>(
    documents: I,
    analyzer: &AnalyzerConfig,
) -> Result<InvertedIndex, RetrievalError>
where
    I: IntoIterator<Item = (S, T)>,
    S: Into<String>,
    T: AsRef<str>,
{
    let mut doc_ids = Vec::new();
    let mut seen = HashSet::new();
    let mut doc_lengths = Vec::new();
    let mut postings: BTreeMap<String, Vec<(u32, u32)>> = BTreeMap::new();
    let mut total_terms = 0u64;

    for (id, text) in documents {
        let id: String = id.into();
        if !seen.insert(id.clone()) {
            return Err(RetrievalError::DuplicateDocId(id));
        }
        let doc = doc_ids.len() as u32;
        let tokens = analyze(text.as_ref(), analyzer);
        let mut tfs: HashMap<String, u32> = HashMap::new();
        for t in &tokens {
            *tfs.entry(t.as_str().to_string()).or_default() += 1;
        }
        for (term, tf) in tfs {
            postings.entry(term).or_default().push((doc, tf));
        }
        doc_lengths.push(tokens.len() as u32);
        total_terms += tokens.len() as u64;
        doc_ids.push(id);
    }
    Ok(InvertedIndex {
        doc_ids,
        doc_lengths,
        postings,
        total_terms,
    })
}
