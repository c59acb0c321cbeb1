use std::cmp::Ordering;

use crate::retrieval::RankedList;

use super::{EvalError, Judgments, Qrels};

/// Recall levels 0.0, 0.1, ..., 1.0.
pub const RECALL_LEVELS: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

pub const GMAP_EPSILON: f64 = 1e-5;

/// Reorders a list the way evaluation reads a run file: score descending,
/// ties by document id descending. The rank column is ignored and rewritten.
pub fn evaluation_order(list: &RankedList) -> RankedList {
    let mut entries = list.entries.clone();
    entries.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(Ordering::Equal)
            .then_with(|| b.doc_id.cmp(&a.doc_id))
    });
    for (i, e) in entries.iter_mut().enumerate() {
        e.rank = i as u32 + 1;
    }
    RankedList {
        query_id: list.query_id.clone(),
        entries,
    }
}

fn judged<'a>(ranked: &RankedList, qrels: &'a Qrels) -> Result<&'a Judgments, EvalError> {
    match qrels.query(&ranked.query_id) {
        Some(j) if j.num_rel() > 0 => Ok(j),
        _ => Err(EvalError::NoRelevant(ranked.query_id.clone())),
    }
}

pub(crate) fn ap_of<'a>(docs: impl Iterator<Item = &'a str>, j: &Judgments) -> f64 {
    let mut found = 0usize;
    let mut sum = 0.0;
    for (i, d) in docs.enumerate() {
        if j.is_relevant(d) {
            found += 1;
            sum += found as f64 / (i + 1) as f64;
        }
    }
    sum / j.num_rel() as f64
}

pub(crate) fn precision_of<'a>(
    docs: impl Iterator<Item = &'a str>,
    j: &Judgments,
    k: usize,
) -> f64 {
    docs.take(k).filter(|d| j.is_relevant(d)).count() as f64 / k as f64
}

pub(crate) fn bpref_of<'a>(docs: impl Iterator<Item = &'a str>, j: &Judgments) -> f64 {
    let r = j.num_rel();
    let bound = r.min(j.num_nonrel());
    let mut nonrel_above = 0usize;
    let mut sum = 0.0;
    for d in docs {
        match j.grade(d) {
            None => {}
            Some(g) if g >= 1 => {
                sum += if nonrel_above == 0 {
                    1.0
                } else {
                    1.0 - nonrel_above.min(r) as f64 / bound as f64
                };
            }
            Some(_) => nonrel_above += 1,
        }
    }
    sum / r as f64
}

pub(crate) fn f_of<'a>(docs: impl Iterator<Item = &'a str>, j: &Judgments) -> f64 {
    let (mut retrieved, mut rel_ret) = (0usize, 0usize);
    for d in docs {
        retrieved += 1;
        if j.is_relevant(d) {
            rel_ret += 1;
        }
    }
    if rel_ret == 0 {
        return 0.0;
    }
    let p = rel_ret as f64 / retrieved as f64;
    let r = rel_ret as f64 / j.num_rel() as f64;
    2.0 * p * r / (p + r)
}

pub(crate) fn interpolated_of<'a>(docs: impl Iterator<Item = &'a str>, j: &Judgments) -> [f64; 11] {
    // best[c] = max precision over ranks holding at least c relevant documents
    let mut at_relevant = Vec::new();
    let mut found = 0usize;
    for (i, d) in docs.enumerate() {
        if j.is_relevant(d) {
            found += 1;
            at_relevant.push(found as f64 / (i + 1) as f64);
        }
    }
    let mut best = vec![0.0f64; at_relevant.len() + 1];
    for c in (0..at_relevant.len()).rev() {
        best[c] = best[c + 1].max(at_relevant[c]);
    }
    // recall level rho needs floor(rho * R + 0.9) relevant documents
    let mut out = [0.0; 11];
    for (slot, &rho) in out.iter_mut().zip(RECALL_LEVELS.iter()) {
        let needed = (rho * j.num_rel() as f64 + 0.9) as usize;
        *slot = match needed {
            0 => best[0],
            c if c <= at_relevant.len() => best[c - 1],
            _ => 0.0,
        };
    }
    out
}

/// Mean over relevant retrieved documents of the precision at their rank,
/// divided by the number of relevant documents R.
pub fn average_precision(ranked: &RankedList, qrels: &Qrels) -> Result<f64, EvalError> {
    Ok(ap_of(ranked.doc_ids(), judged(ranked, qrels)?))
}

pub fn mean_ap(aps: &[f64]) -> Result<f64, EvalError> {
    if aps.is_empty() {
        return Err(EvalError::NoQueries);
    }
    Ok(aps.iter().sum::<f64>() / aps.len() as f64)
}

/// Geometric mean of APs, each clamped below at `epsilon`.
pub fn gmap(aps: &[f64], epsilon: f64) -> Result<f64, EvalError> {
    if aps.is_empty() {
        return Err(EvalError::NoQueries);
    }
    let mean_log = aps.iter().map(|&a| a.max(epsilon).ln()).sum::<f64>() / aps.len() as f64;
    Ok(mean_log.exp())
}

/// Relevant documents among the first `k`, divided by `k` even when fewer
/// were retrieved. Unjudged documents count as nonrelevant.
pub fn precision_at_k(ranked: &RankedList, qrels: &Qrels, k: usize) -> Result<f64, EvalError> {
    if k == 0 {
        return Err(EvalError::InvalidArgument(
            "precision cutoff must be at least 1".into(),
        ));
    }
    Ok(match qrels.query(&ranked.query_id) {
        Some(j) => precision_of(ranked.doc_ids(), j, k),
        None => 0.0,
    })
}

pub fn bpref(ranked: &RankedList, qrels: &Qrels) -> Result<f64, EvalError> {
    Ok(bpref_of(ranked.doc_ids(), judged(ranked, qrels)?))
}

/// Set F1 over the whole retrieved list.
pub fn f_measure(ranked: &RankedList, qrels: &Qrels) -> Result<f64, EvalError> {
    Ok(f_of(ranked.doc_ids(), judged(ranked, qrels)?))
}

/// Interpolated precision at the 11 standard recall levels: the best
/// precision at any rank whose recall reaches the level, where a level
/// `rho` counts as reached once `floor(rho * R + 0.9)` relevant documents
/// are retrieved.
pub fn interpolated_pr(ranked: &RankedList, qrels: &Qrels) -> Result<[f64; 11], EvalError> {
    Ok(interpolated_of(ranked.doc_ids(), judged(ranked, qrels)?))
}

/// `100 · (new − baseline) / baseline`.
pub fn relative_improvement(new: f64, baseline: f64) -> Result<f64, EvalError> {
    if baseline.is_nan() || baseline <= 0.0 {
        return Err(EvalError::ZeroBaseline);
    }
    Ok(100.0 * (new - baseline) / baseline)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::retrieval::RankedEntry;
    use approx::assert_relative_eq;

    fn ranked(docs: &[&str]) -> RankedList {
        RankedList {
            query_id: "q".into(),
            entries: docs
                .iter()
                .enumerate()
                .map(|(i, d)| RankedEntry {
                    doc_id: d.to_string(),
                    rank: i as u32 + 1,
                    score: -(i as f64),
                })
                .collect(),
        }
    }

    fn qrels(pairs: &[(&str, i32)]) -> Qrels {
        Qrels::from_judgments(pairs.iter().map(|&(d, g)| ("q", d, g))).unwrap()
    }

    #[test]
    fn ap_hand_cases() {
        let q = qrels(&[("r1", 1), ("r2", 1), ("n", 0)]);
        assert_relative_eq!(
            average_precision(&ranked(&["r1", "n", "r2"]), &q).unwrap(),
            5.0 / 6.0
        );
        assert_eq!(
            average_precision(&ranked(&["r2", "r1", "n"]), &q).unwrap(),
            1.0
        );
        assert_eq!(average_precision(&ranked(&["n", "x"]), &q).unwrap(), 0.0);
        let none = qrels(&[("n", 0)]);
        assert!(matches!(
            average_precision(&ranked(&["n"]), &none),
            Err(EvalError::NoRelevant(_))
        ));
    }

    #[test]
    fn mean_and_gmap() {
        assert_relative_eq!(mean_ap(&[0.25, 0.64]).unwrap(), 0.445);
        assert_relative_eq!(
            gmap(&[0.25, 0.64], GMAP_EPSILON).unwrap(),
            0.4,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            gmap(&[0.3, 0.3], GMAP_EPSILON).unwrap(),
            0.3,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            gmap(&[0.0, 1.0], GMAP_EPSILON).unwrap(),
            (1e-5f64).sqrt(),
            max_relative = 1e-12
        );
        assert!(mean_ap(&[]).is_err());
    }

    #[test]
    fn precision_cases() {
        let q = qrels(&[("a", 1), ("b", 1), ("c", 1), ("d", 1), ("e", 1)]);
        let seven = ranked(&["a", "x", "b", "y", "c", "d", "z"]);
        assert_relative_eq!(precision_at_k(&seven, &q, 10).unwrap(), 0.4);
        assert_relative_eq!(precision_at_k(&seven, &q, 2).unwrap(), 0.5);
        assert_eq!(precision_at_k(&ranked(&[]), &q, 5).unwrap(), 0.0);
        assert!(precision_at_k(&seven, &q, 0).is_err());
    }

    #[test]
    fn bpref_hand_cases() {
        let q = qrels(&[("r1", 1), ("r2", 1), ("n", 0)]);
        assert_eq!(bpref(&ranked(&["r1", "r2", "n"]), &q).unwrap(), 1.0);
        assert_eq!(bpref(&ranked(&["n", "r1", "r2"]), &q).unwrap(), 0.0);
        let q = qrels(&[("r1", 1), ("r2", 1), ("n1", 0), ("n2", 0), ("n3", 0)]);
        assert_eq!(bpref(&ranked(&["r1", "unjudged", "r2"]), &q).unwrap(), 1.0);
        assert_eq!(bpref(&ranked(&["r1", "n1", "r2"]), &q).unwrap(), 0.75);
        let only_rel = qrels(&[("r1", 1), ("r2", 1)]);
        assert_eq!(bpref(&ranked(&["x", "r2"]), &only_rel).unwrap(), 0.5);
    }

    #[test]
    fn f_cases() {
        let q = qrels(&[("a", 1), ("b", 1)]);
        assert_eq!(f_measure(&ranked(&["a", "b"]), &q).unwrap(), 1.0);
        assert_relative_eq!(f_measure(&ranked(&["a", "x"]), &q).unwrap(), 0.5);
        let q = qrels(&[("a", 1), ("b", 1), ("c", 1), ("d", 1), ("e", 1)]);
        let ten = ranked(&["a", "b", "c", "x1", "x2", "x3", "x4", "x5", "x6", "x7"]);
        assert_relative_eq!(f_measure(&ten, &q).unwrap(), 0.4, max_relative = 1e-12);
        assert_eq!(f_measure(&ranked(&["x"]), &q).unwrap(), 0.0);
    }

    #[test]
    fn interpolation() {
        let q = qrels(&[("r1", 1), ("r2", 1)]);
        let curve = interpolated_pr(&ranked(&["r1", "n", "r2"]), &q).unwrap();
        for (i, p) in curve.iter().enumerate() {
            let want = if i <= 5 { 1.0 } else { 2.0 / 3.0 };
            assert_relative_eq!(*p, want);
        }
        assert_eq!(
            interpolated_pr(&ranked(&["r2", "r1"]), &q).unwrap(),
            [1.0; 11]
        );
        assert_eq!(interpolated_pr(&ranked(&["x"]), &q).unwrap(), [0.0; 11]);
    }

    #[test]
    fn improvement() {
        assert_relative_eq!(
            relative_improvement(0.3481, 0.2765).unwrap(),
            25.8951,
            epsilon = 1e-4
        );
        assert_relative_eq!(
            relative_improvement(0.2495, 0.1907).unwrap(),
            30.8338,
            epsilon = 1e-4
        );
        assert_relative_eq!(
            relative_improvement(0.2158, 0.1907).unwrap(),
            13.1621,
            epsilon = 1e-4
        );
        assert_eq!(relative_improvement(0.3, 0.3).unwrap(), 0.0);
        assert!(matches!(
            relative_improvement(0.3, 0.0),
            Err(EvalError::ZeroBaseline)
        ));
    }

    #[test]
    fn trec_tie_order() {
        let mut l = ranked(&["a", "c", "b"]);
        for e in &mut l.entries {
            e.score = 1.0;
        }
        l.entries[0].score = 0.5;
        let o = evaluation_order(&l);
        assert_eq!(o.doc_ids().collect::<Vec<_>>(), ["c", "b", "a"]);
    }
}
