use serde::{Deserialize, Serialize};

use crate::textproc::{tokenize, AnalyzerConfig, Token};
use crate::websource::{build_corpus, EngineId, Snapshot};

use super::weights::{correlation_score, sort_scored, ScoredTerm, Stage};
use super::{build_stats, knn_select, rank_by_tf_itf, ExpansionError, KnnParams};

/// A topic title reduced to its distinct unstemmed terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    id: String,
    terms: Vec<Token>,
}

impl Query {
    pub fn new(id: impl Into<String>, terms: Vec<Token>) -> Result<Self, ExpansionError> {
        let id = id.into();
        let mut distinct: Vec<Token> = Vec::with_capacity(terms.len());
        for t in terms {
            if !distinct.contains(&t) {
                distinct.push(t);
            }
        }
        if distinct.is_empty() {
            return Err(ExpansionError::EmptyQuery(id));
        }
        Ok(Self {
            id,
            terms: distinct,
        })
    }

    /// Tokenizes a title with the expansion analyzer (no stemming).
    pub fn from_title(
        id: impl Into<String>,
        title: &str,
        analyzer: &AnalyzerConfig,
    ) -> Result<Self, ExpansionError> {
        Self::new(id, tokenize(title, analyzer))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn terms(&self) -> &[Token] {
        &self.terms
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExpansionConfig {
    /// Pseudo-relevant documents taken per engine (N).
    pub n_docs: usize,
    /// Intermediate tf-itf candidates (M).
    pub m_intermediate: usize,
    pub knn: KnnParams,
    /// Expansion terms kept (n).
    pub n_final: usize,
    pub engines: Vec<EngineId>,
    /// Collapse pages returned by several engines into one document.
    pub dedup: bool,
}

impl Default for ExpansionConfig {
    fn default() -> Self {
        Self {
            n_docs: 20,
            m_intermediate: 100,
            knn: KnnParams::default(),
            n_final: 15,
            engines: EngineId::defaults(),
            dedup: false,
        }
    }
}

impl ExpansionConfig {
    pub fn validate(&self) -> Result<(), ExpansionError> {
        self.knn.validate()?;
        let invalid = |msg: String| Err(ExpansionError::InvalidConfig(msg));
        if self.n_docs == 0 {
            return invalid("n_docs must be at least 1".into());
        }
        if self.engines.is_empty() {
            return invalid("at least one engine is required".into());
        }
        if self.n_final == 0 || self.n_final > self.knn.k {
            return invalid(format!(
                "need 1 <= n_final <= k (n_final={}, k={})",
                self.n_final, self.knn.k
            ));
        }
        if self.m_intermediate < self.knn.required_candidates() {
            return invalid(format!(
                "M={} is smaller than k + l*r0 = {}",
                self.m_intermediate,
                self.knn.required_candidates()
            ));
        }
        Ok(())
    }
}

/// The original query with its weighted expansion terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpandedQuery {
    pub original: Query,
    /// Expansion terms with their correlation scores, best first.
    pub expansion: Vec<(Token, f64)>,
    pub provenance: ExpansionConfig,
}

impl ExpandedQuery {
    /// Terms and weights for retrieval. Original terms weigh 1; expansion
    /// terms weigh `beta · score / max_score`, so the strongest expansion
    /// term gets exactly `beta`. Terms with a zero score are left out.
    pub fn weighted_terms(&self, beta: f64) -> Vec<(Token, f64)> {
        let mut out: Vec<(Token, f64)> = self
            .original
            .terms()
            .iter()
            .map(|t| (t.clone(), 1.0))
            .collect();
        let max = self.expansion.iter().map(|(_, s)| *s).fold(0.0, f64::max);
        if max > 0.0 && beta > 0.0 {
            out.extend(
                self.expansion
                    .iter()
                    .filter(|(_, s)| *s > 0.0)
                    .map(|(t, s)| (t.clone(), beta * s / max)),
            );
        }
        out
    }
}

/// Correlation scores of `candidates` with the query, best first, with
/// original query terms removed.
pub fn rerank_by_correlation(
    candidates: &[Token],
    query: &Query,
    corpus: &super::Corpus,
) -> Result<Vec<ScoredTerm>, ExpansionError> {
    let mut scored = candidates
        .iter()
        .map(|t| {
            Ok(ScoredTerm {
                term: t.clone(),
                score: correlation_score(t.as_str(), query, corpus)?,
                stage: Stage::Correlation,
            })
        })
        .collect::<Result<Vec<_>, ExpansionError>>()?;
    sort_scored(&mut scored);
    scored.retain(|s| !query.terms().contains(&s.term));
    Ok(scored)
}

/// Runs the full expansion for one query: corpus from the snapshot, tf-itf
/// candidates, kNN selection, correlation reweighting, and the top
/// `n_final` terms that are not already in the query.
pub fn expand_query(
    query: &Query,
    snapshot: &Snapshot,
    config: &ExpansionConfig,
    analyzer: &AnalyzerConfig,
) -> Result<ExpandedQuery, ExpansionError> {
    config.validate()?;
    let docs = build_corpus(
        snapshot,
        query.id(),
        &config.engines,
        config.n_docs,
        config.dedup,
    )?;
    let corpus = build_stats(&docs, analyzer)?;
    let c_exp = rank_by_tf_itf(&corpus, config.m_intermediate);
    let neighbours = knn_select(&c_exp, &corpus, config.knn)?;
    let mut ranked = rerank_by_correlation(&neighbours, query, &corpus)?;
    ranked.truncate(config.n_final);
    Ok(ExpandedQuery {
        original: query.clone(),
        expansion: ranked.into_iter().map(|s| (s.term, s.score)).collect(),
        provenance: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn query_terms_are_distinct() {
        let q =
            Query::from_title("1", "Water water on Mars", &AnalyzerConfig::expansion()).unwrap();
        assert_eq!(q.terms(), ["water", "mars"].map(Token::from));
        assert!(matches!(
            Query::from_title("2", "the of", &AnalyzerConfig::expansion()),
            Err(ExpansionError::EmptyQuery(_))
        ));
    }

    #[test]
    fn config_validation() {
        assert!(ExpansionConfig::default().validate().is_ok());
        let bad = ExpansionConfig {
            n_final: 41,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = ExpansionConfig {
            m_intermediate: 49,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let ok = ExpansionConfig {
            m_intermediate: 50,
            ..Default::default()
        };
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn retrieval_weights() {
        let eq = ExpandedQuery {
            original: Query::new("q", vec![Token::from("life")]).unwrap(),
            expansion: vec![
                (Token::from("mars"), 8.0),
                (Token::from("ice"), 2.0),
                (Token::from("zero"), 0.0),
            ],
            provenance: ExpansionConfig::default(),
        };
        let w = eq.weighted_terms(0.5);
        assert_eq!(
            w,
            vec![
                (Token::from("life"), 1.0),
                (Token::from("mars"), 0.5),
                (Token::from("ice"), 0.125)
            ]
        );
        assert_eq!(eq.weighted_terms(0.0).len(), 1);
    }
}
