use std::collections::BTreeMap;

use super::{CollectionStats, RetrievalError, TermStats};

/// A term-weighting function for ranked retrieval.
///
/// `score` returns the contribution of one query term with unit weight to a
/// document in which it occurs `tf > 0` times. Implementations must be
/// deterministic and non-negative; the divergence-from-randomness family
/// and other models plug in here.
pub trait WeightingModel: Send + Sync {
    fn name(&self) -> &str;

    fn score(
        &self,
        tf: f64,
        doc_length: f64,
        term: &TermStats,
        collection: &CollectionStats,
    ) -> f64;
}

/// Okapi BM25 with the `ln(1 + (D - df + 0.5) / (df + 0.5))` idf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bm25 {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25 {
    fn default() -> Self {
        Self { k1: 1.2, b: 0.75 }
    }
}

impl WeightingModel for Bm25 {
    fn name(&self) -> &str {
        "bm25"
    }

    fn score(
        &self,
        tf: f64,
        doc_length: f64,
        term: &TermStats,
        collection: &CollectionStats,
    ) -> f64 {
        let d = collection.doc_count as f64;
        let df = term.doc_freq as f64;
        let idf = ((d - df + 0.5) / (df + 0.5) + 1.0).ln();
        let norm = if collection.avg_doc_length > 0.0 {
            1.0 - self.b + self.b * doc_length / collection.avg_doc_length
        } else {
            1.0
        };
        idf * tf * (self.k1 + 1.0) / (tf + self.k1 * norm)
    }
}

/// Raw tf times `ln(D / df)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TfIdf;

impl WeightingModel for TfIdf {
    fn name(&self) -> &str {
        "tfidf"
    }

    fn score(
        &self,
        tf: f64,
        _doc_length: f64,
        term: &TermStats,
        collection: &CollectionStats,
    ) -> f64 {
        if term.doc_freq == 0 {
            return 0.0;
        }
        tf * (collection.doc_count as f64 / term.doc_freq as f64).ln()
    }
}

/// Instantiates a built-in model by id (`bm25`, `tfidf`). BM25 accepts the
/// parameters `k1` and `b`.
pub fn model_by_name(
    name: &str,
    params: &BTreeMap<String, f64>,
) -> Result<Box<dyn WeightingModel>, RetrievalError> {
    let check_params = |allowed: &[&str]| {
        for key in params.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(RetrievalError::InvalidModel(format!(
                    "{name} has no parameter {key}"
                )));
            }
        }
        Ok(())
    };
    match name.to_ascii_lowercase().as_str() {
        "bm25" => {
            check_params(&["k1", "b"])?;
            let d = Bm25::default();
            let model = Bm25 {
                k1: params.get("k1").copied().unwrap_or(d.k1),
                b: params.get("b").copied().unwrap_or(d.b),
            };
            if model.k1 < 0.0 || !(0.0..=1.0).contains(&model.b) {
                return Err(RetrievalError::InvalidModel(format!(
                    "bm25 needs k1 >= 0 and b in [0, 1], got {model:?}"
                )));
            }
            Ok(Box::new(model))
        }
        "tfidf" | "tf-idf" | "tf_idf" => {
            check_params(&[])?;
            Ok(Box::new(TfIdf))
        }
        other => Err(RetrievalError::InvalidModel(format!(
            "unknown weighting model {other:?}"
        ))),
    }
}
