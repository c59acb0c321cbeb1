use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::textproc::Token;

use super::weights::{cosine_of, sort_scored, weight_vector, ScoredTerm, Stage};
use super::{Corpus, ExpansionError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct KnnParams {
    /// Number of terms returned.
    pub k: usize,
    /// Least-similar terms dropped per iteration.
    pub l: usize,
    /// Number of iterations.
    pub r0: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        Self { k: 40, l: 2, r0: 5 }
    }
}

impl KnnParams {
    pub fn validate(&self) -> Result<(), ExpansionError> {
        if self.r0 == 0 || self.k < self.r0 {
            return Err(ExpansionError::InvalidConfig(format!(
                "kNN needs k >= r0 >= 1 (k={}, r0={})",
                self.k, self.r0
            )));
        }
        Ok(())
    }

    /// Smallest candidate list the selection can run on.
    pub fn required_candidates(&self) -> usize {
        self.k + self.l * self.r0
    }
}

/// Iterative nearest-neighbour selection over tf-itf candidates.
///
/// Starting from the best tf-itf term, each of the `r0` rounds moves the
/// current best term `t` into the output, rescores every remaining candidate
/// by its cosine similarity to `t`, discards the `l` least similar and takes
/// the new most similar term as the next `t`. The `k - r0` best remaining
/// candidates by the last round's scores complete the output.
///
/// All rankings order by score descending, then term ascending; the `l`
/// discarded terms are the tail of that order. A candidate whose weight
/// vector is all zero has similarity 0 to everything.
pub fn knn_select(
    c_exp: &[ScoredTerm],
    corpus: &Corpus,
    params: KnnParams,
) -> Result<Vec<Token>, ExpansionError> {
    params.validate()?;
    if c_exp.len() < params.required_candidates() {
        return Err(ExpansionError::InsufficientTerms {
            available: c_exp.len(),
            required: params.required_candidates(),
        });
    }

    let vectors: HashMap<&str, Vec<(usize, f64)>> = c_exp
        .iter()
        .map(|s| Ok((s.term.as_str(), weight_vector(s.term.as_str(), corpus)?)))
        .collect::<Result<_, ExpansionError>>()?;

    let mut pool: Vec<ScoredTerm> = c_exp.to_vec();
    sort_scored(&mut pool);
    let mut nn: Vec<Token> = Vec::with_capacity(params.k);
    let mut current = Some(pool[0].term.clone());

    for _ in 0..params.r0 {
        let t = current
            .take()
            .expect("pool holds at least k - r0 + 1 terms before each round");
        pool.retain(|s| s.term != t);
        let anchor = &vectors[t.as_str()];
        for cand in &mut pool {
            cand.score = cosine_of(anchor, &vectors[cand.term.as_str()]).unwrap_or(0.0);
            cand.stage = Stage::Cosine;
        }
        sort_scored(&mut pool);
        pool.truncate(pool.len() - params.l);
        current = pool.first().map(|s| s.term.clone());
        nn.push(t);
    }

    nn.extend(pool.into_iter().take(params.k - params.r0).map(|s| s.term));
    Ok(nn)
}
