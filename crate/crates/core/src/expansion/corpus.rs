use std::collections::{BTreeMap, HashMap};

use crate::textproc::{tokenize, AnalyzerConfig, Token};
use crate::websource::WebDocument;

use super::ExpansionError;

/// Term statistics of the combined pseudo-relevant collection.
///
/// Documents keep their input order; documents that contribute no tokens
/// after analysis are left out, since a document without terms has no
/// defined weight.
#[derive(Debug, Clone)]
pub struct Corpus {
    doc_ids: Vec<String>,
    doc_tfs: Vec<HashMap<Token, u32>>,
    total_tokens: u64,
    /// term -> (doc index, tf) in ascending doc order
    postings: BTreeMap<Token, Vec<(usize, u32)>>,
    term_totals: HashMap<Token, u64>,
}

impl Corpus {
    /// Builds statistics from already-analyzed token streams.
    pub fn from_tokens<I, S>(docs: I) -> Result<Self, ExpansionError>
    where
        I: IntoIterator<Item = (S, Vec<Token>)>,
        S: Into<String>,
    {
        let mut doc_ids = Vec::new();
        let mut doc_tfs = Vec::new();
        let mut postings: BTreeMap<Token, Vec<(usize, u32)>> = BTreeMap::new();
        let mut term_totals: HashMap<Token, u64> = HashMap::new();
        let mut total_tokens = 0u64;

        for (id, tokens) in docs {
            if tokens.is_empty() {
                continue;
            }
            let idx = doc_ids.len();
            let mut tfs: HashMap<Token, u32> = HashMap::new();
            for t in tokens {
                *tfs.entry(t).or_default() += 1;
                total_tokens += 1;
            }
            for (t, &tf) in &tfs {
                postings.entry(t.clone()).or_default().push((idx, tf));
                *term_totals.entry(t.clone()).or_default() += u64::from(tf);
            }
            doc_ids.push(id.into());
            doc_tfs.push(tfs);
        }
        if total_tokens == 0 {
            return Err(ExpansionError::EmptyCorpus);
        }
        Ok(Self {
            doc_ids,
            doc_tfs,
            total_tokens,
            postings,
            term_totals,
        })
    }

    /// Tokenizes raw `(id, text)` pairs.
    pub fn from_texts<'a, I>(docs: I, analyzer: &AnalyzerConfig) -> Result<Self, ExpansionError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        Self::from_tokens(
            docs.into_iter()
                .map(|(id, text)| (id, tokenize(text, analyzer))),
        )
    }

    pub fn doc_count(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    /// T: number of token occurrences in the collection.
    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// |t|: occurrences of `term` in the collection, 0 if absent.
    pub fn term_total(&self, term: &str) -> u64 {
        self.term_totals.get(term).copied().unwrap_or(0)
    }

    pub fn contains(&self, term: &str) -> bool {
        self.term_totals.contains_key(term)
    }

    /// |DT_j|: number of distinct terms in document `doc`.
    pub fn distinct_terms(&self, doc: usize) -> Option<usize> {
        self.doc_tfs.get(doc).map(HashMap::len)
    }

    pub fn tf(&self, term: &str, doc: usize) -> Option<u32> {
        self.doc_tfs
            .get(doc)
            .map(|tfs| tfs.get(term).copied().unwrap_or(0))
    }

    /// Distinct terms in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = &Token> {
        self.postings.keys()
    }

    pub fn term_count(&self) -> usize {
        self.postings.len()
    }

    pub(crate) fn postings(&self, term: &str) -> Option<&[(usize, u32)]> {
        self.postings.get(term).map(Vec::as_slice)
    }
}

/// Analyzes the documents and gathers their statistics. Document ids are
/// `engine#rank`.
pub fn build_stats(
    docs: &[&WebDocument],
    analyzer: &AnalyzerConfig,
) -> Result<Corpus, ExpansionError> {
    if docs.is_empty() {
        return Err(ExpansionError::EmptyCorpus);
    }
    Corpus::from_tokens(docs.iter().map(|d| {
        (
            format!("{}#{}", d.entry.engine, d.entry.rank),
            tokenize(&d.extracted_text, analyzer),
        )
    }))
}
