use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::textproc::Token;

use super::{Corpus, ExpansionError, Query};

/// Which weighting stage produced a score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    TfItf,
    Cosine,
    Correlation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredTerm {
    pub term: Token,
    pub score: f64,
    pub stage: Stage,
}

/// Score descending, then term ascending. Used for every ranking and
/// argmax in the expansion pipeline.
pub fn by_score_then_term(a_score: f64, a_term: &str, b_score: f64, b_term: &str) -> Ordering {
    b_score.total_cmp(&a_score).then_with(|| a_term.cmp(b_term))
}

pub(crate) fn sort_scored(terms: &mut [ScoredTerm]) {
    terms.sort_by(|a, b| by_score_then_term(a.score, a.term.as_str(), b.score, b.term.as_str()));
}

fn unknown(term: &str) -> ExpansionError {
    ExpansionError::UnknownTerm(term.to_string())
}

/// tf(t, C) · ln(T / |t|). Since both factors count occurrences of the term
/// in the whole collection this equals f · ln(T / f).
pub fn tf_itf(term: &str, corpus: &Corpus) -> Result<f64, ExpansionError> {
    tf_itf_in_base(term, corpus, std::f64::consts::E)
}

/// tf-itf with the logarithm taken in `base`.
pub fn tf_itf_in_base(term: &str, corpus: &Corpus, base: f64) -> Result<f64, ExpansionError> {
    let f = corpus.term_total(term);
    if f == 0 {
        return Err(unknown(term));
    }
    let ratio = corpus.total_tokens() as f64 / f as f64;
    Ok(f as f64 * log(ratio, base))
}

fn log(x: f64, base: f64) -> f64 {
    if base == std::f64::consts::E {
        x.ln()
    } else {
        x.ln() / base.ln()
    }
}

/// Every distinct term scored by tf-itf, best first, cut to `m`.
pub fn rank_by_tf_itf(corpus: &Corpus, m: usize) -> Vec<ScoredTerm> {
    rank_by_tf_itf_in_base(corpus, m, std::f64::consts::E)
}

pub fn rank_by_tf_itf_in_base(corpus: &Corpus, m: usize, base: f64) -> Vec<ScoredTerm> {
    let mut scored: Vec<ScoredTerm> = corpus
        .terms()
        .map(|t| ScoredTerm {
            term: t.clone(),
            score: tf_itf_in_base(t.as_str(), corpus, base).expect("term from corpus"),
            stage: Stage::TfItf,
        })
        .collect();
    sort_scored(&mut scored);
    scored.truncate(m);
    scored
}

/// tf(t, j) · ln(T / |DT_j|); zero when the term does not occur in `doc`.
pub fn doc_weight(term: &str, doc: usize, corpus: &Corpus) -> Result<f64, ExpansionError> {
    let tf = corpus
        .tf(term, doc)
        .ok_or(ExpansionError::UnknownDocument(doc))?;
    let distinct = corpus
        .distinct_terms(doc)
        .ok_or(ExpansionError::UnknownDocument(doc))?;
    Ok(weight(tf, distinct, corpus))
}

fn weight(tf: u32, distinct: usize, corpus: &Corpus) -> f64 {
    if tf == 0 {
        return 0.0;
    }
    f64::from(tf) * (corpus.total_tokens() as f64 / distinct as f64).ln()
}

/// Sparse document-weight vector of a term, ascending by document index.
pub fn weight_vector(term: &str, corpus: &Corpus) -> Result<Vec<(usize, f64)>, ExpansionError> {
    let postings = corpus.postings(term).ok_or_else(|| unknown(term))?;
    Ok(postings
        .iter()
        .map(|&(doc, tf)| {
            let distinct = corpus.distinct_terms(doc).expect("posting doc exists");
            (doc, weight(tf, distinct, corpus))
        })
        .collect())
}

/// Dot product of two sparse weight vectors.
pub fn sparse_dot(a: &[(usize, f64)], b: &[(usize, f64)]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut sum = 0.0;
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                sum += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    sum
}

/// Σ_j w(a, j) · w(b, j) over the documents of the collection.
pub fn term_correlation(a: &str, b: &str, corpus: &Corpus) -> Result<f64, ExpansionError> {
    Ok(sparse_dot(
        &weight_vector(a, corpus)?,
        &weight_vector(b, corpus)?,
    ))
}

/// Cosine of two sparse weight vectors; `None` if either is all zero.
pub fn cosine_of(a: &[(usize, f64)], b: &[(usize, f64)]) -> Option<f64> {
    let aa = sparse_dot(a, a);
    let bb = sparse_dot(b, b);
    if aa == 0.0 || bb == 0.0 {
        return None;
    }
    Some((sparse_dot(a, b) / (aa * bb).sqrt()).min(1.0))
}

/// Cosine of the two terms' document-weight vectors.
pub fn cosine_sim(a: &str, b: &str, corpus: &Corpus) -> Result<f64, ExpansionError> {
    let va = weight_vector(a, corpus)?;
    let vb = weight_vector(b, corpus)?;
    if a == b && !va.iter().all(|&(_, w)| w == 0.0) {
        return Ok(1.0);
    }
    cosine_of(&va, &vb).ok_or_else(|| {
        let zero = if sparse_dot(&va, &va) == 0.0 { a } else { b };
        ExpansionError::ZeroVector(zero.to_string())
    })
}

/// Mean correlation of `term` with each query term. Query terms missing from
/// the collection contribute zero but still count in the mean.
pub fn correlation_score(
    term: &str,
    query: &Query,
    corpus: &Corpus,
) -> Result<f64, ExpansionError> {
    let vt = weight_vector(term, corpus)?;
    let sum: f64 = query
        .terms()
        .iter()
        .map(|q| match weight_vector(q.as_str(), corpus) {
            Ok(vq) => sparse_dot(&vt, &vq),
            Err(_) => 0.0,
        })
        .sum();
    Ok(sum / query.terms().len() as f64)
}
