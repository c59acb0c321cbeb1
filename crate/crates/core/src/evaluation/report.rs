use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::retrieval::RankedList;

use super::metrics::{
    ap_of, bpref_of, evaluation_order, f_of, interpolated_of, precision_of, RECALL_LEVELS,
};
use super::{gmap, mean_ap, EvalError, Qrels, TopicSet, GMAP_EPSILON};

pub const PRECISION_CUTOFFS: [usize; 4] = [5, 10, 20, 30];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryMetrics {
    pub query_id: String,
    pub num_rel: usize,
    pub num_ret: usize,
    pub rel_ret: usize,
    pub ap: f64,
    pub p5: f64,
    pub p10: f64,
    pub p20: f64,
    pub p30: f64,
    pub bpref: f64,
    pub f: f64,
    pub iprec: [f64; 11],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateMetrics {
    pub num_queries: usize,
    pub map: f64,
    pub gm_map: f64,
    pub p5: f64,
    pub p10: f64,
    pub p20: f64,
    pub p30: f64,
    pub bpref: f64,
    pub f: f64,
    pub num_rel: usize,
    pub num_ret: usize,
    pub rel_ret: usize,
    pub iprec: [f64; 11],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    /// In lexical query-id order.
    pub per_query: Vec<QueryMetrics>,
    pub aggregate: AggregateMetrics,
    /// Judged queries left out because they have no relevant document.
    pub excluded: Vec<String>,
}

fn query_metrics(query_id: &str, docs: &[&str], qrels: &Qrels) -> QueryMetrics {
    let j = qrels.query(query_id).expect("caller checked judgments");
    let it = || docs.iter().copied();
    QueryMetrics {
        query_id: query_id.to_string(),
        num_rel: j.num_rel(),
        num_ret: docs.len(),
        rel_ret: it().filter(|d| j.is_relevant(d)).count(),
        ap: ap_of(it(), j),
        p5: precision_of(it(), j, 5),
        p10: precision_of(it(), j, 10),
        p20: precision_of(it(), j, 20),
        p30: precision_of(it(), j, 30),
        bpref: bpref_of(it(), j),
        f: f_of(it(), j),
        iprec: interpolated_of(it(), j),
    }
}

/// Evaluates a run against judgments.
///
/// Every judged query with at least one relevant document is evaluated,
/// restricted to `topics` when given; a query absent from the run scores 0
/// everywhere. Run entries are read in score-descending order with ties
/// broken by document id descending. Queries with judgments but no relevant
/// document are listed in `excluded`.
pub fn evaluate(
    run: &[RankedList],
    qrels: &Qrels,
    topics: Option<&TopicSet>,
) -> Result<MetricsReport, EvalError> {
    let mut by_query: HashMap<&str, RankedList> = HashMap::new();
    for list in run {
        let mut seen = HashSet::new();
        for e in &list.entries {
            if !seen.insert(e.doc_id.as_str()) {
                return Err(EvalError::DuplicateDocument {
                    query_id: list.query_id.clone(),
                    doc_id: e.doc_id.clone(),
                });
            }
        }
        if by_query
            .insert(list.query_id.as_str(), evaluation_order(list))
            .is_some()
        {
            return Err(EvalError::InvalidArgument(format!(
                "query {} appears in two lists",
                list.query_id
            )));
        }
    }

    let mut per_query = Vec::new();
    let mut excluded = Vec::new();
    for qid in qrels.query_ids() {
        if topics.is_some_and(|t| t.title(qid).is_none()) {
            continue;
        }
        if qrels.query(qid).is_some_and(|j| j.num_rel() == 0) {
            log::warn!("query {qid} has no relevant documents and is excluded");
            excluded.push(qid.to_string());
            continue;
        }
        let docs: Vec<&str> = by_query
            .get(qid)
            .map(|l| l.doc_ids().collect())
            .unwrap_or_default();
        per_query.push(query_metrics(qid, &docs, qrels));
    }
    if per_query.is_empty() {
        return Err(EvalError::NoQueries);
    }
    let aggregate = aggregate(&per_query)?;
    Ok(MetricsReport {
        per_query,
        aggregate,
        excluded,
    })
}

fn aggregate(per_query: &[QueryMetrics]) -> Result<AggregateMetrics, EvalError> {
    let n = per_query.len() as f64;
    let mean = |f: fn(&QueryMetrics) -> f64| per_query.iter().map(f).sum::<f64>() / n;
    let aps: Vec<f64> = per_query.iter().map(|q| q.ap).collect();
    let mut iprec = [0.0; 11];
    for (i, slot) in iprec.iter_mut().enumerate() {
        *slot = per_query.iter().map(|q| q.iprec[i]).sum::<f64>() / n;
    }
    Ok(AggregateMetrics {
        num_queries: per_query.len(),
        map: mean_ap(&aps)?,
        gm_map: gmap(&aps, GMAP_EPSILON)?,
        p5: mean(|q| q.p5),
        p10: mean(|q| q.p10),
        p20: mean(|q| q.p20),
        p30: mean(|q| q.p30),
        bpref: mean(|q| q.bpref),
        f: mean(|q| q.f),
        num_rel: per_query.iter().map(|q| q.num_rel).sum(),
        num_ret: per_query.iter().map(|q| q.num_ret).sum(),
        rel_ret: per_query.iter().map(|q| q.rel_ret).sum(),
        iprec,
    })
}

impl MetricsReport {
    /// Fixed-width table, one row per query and a final `all` row.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<10} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}",
            "query", "AP", "P@5", "P@10", "P@20", "P@30", "bpref", "F", "rel", "rel_ret"
        );
        for q in &self.per_query {
            let _ = writeln!(
                out,
                "{:<10} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7} {:>7}",
                q.query_id, q.ap, q.p5, q.p10, q.p20, q.p30, q.bpref, q.f, q.num_rel, q.rel_ret
            );
        }
        let a = &self.aggregate;
        let _ = writeln!(
            out,
            "{:<10} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7} {:>7}",
            "all", a.map, a.p5, a.p10, a.p20, a.p30, a.bpref, a.f, a.num_rel, a.rel_ret
        );
        let _ = writeln!(
            out,
            "queries {}  MAP {:.4}  GM_MAP {:.4}",
            a.num_queries, a.map, a.gm_map
        );
        if !self.excluded.is_empty() {
            let _ = writeln!(
                out,
                "excluded (no relevant documents): {}",
                self.excluded.join(" ")
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `recall,precision` rows of the averaged 11-point curve.
    pub fn pr_curve_csv(&self) -> String {
        let mut out = String::from("recall,precision\n");
        for (r, p) in RECALL_LEVELS.iter().zip(self.aggregate.iprec.iter()) {
            let _ = writeln!(out, "{r:.1},{p:.4}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::retrieval::parse_run;
    use approx::assert_relative_eq;

    #[test]
    fn missing_query_scores_zero() {
        let qrels = Qrels::parse("1 0 a 1\n1 0 b 0\n2 0 c 1\n3 0 d 0\n", "q").unwrap();
        let run = parse_run("1 Q0 a 1 2.0 t\n1 Q0 b 2 1.0 t\n9 Q0 a 1 1.0 t\n", "r").unwrap();
        let report = evaluate(&run, &qrels, None).unwrap();
        assert_eq!(report.per_query.len(), 2);
        assert_eq!(report.excluded, ["3"]);
        assert_eq!(report.per_query[0].ap, 1.0);
        assert_eq!(report.per_query[1].ap, 0.0);
        assert_eq!(report.per_query[1].num_ret, 0);
        assert_relative_eq!(report.aggregate.map, 0.5);
        assert_relative_eq!(
            report.aggregate.gm_map,
            (1e-5f64).sqrt(),
            max_relative = 1e-12
        );

        let topics = TopicSet::from_pairs([("1", "x")]).unwrap();
        let one = evaluate(&run, &qrels, Some(&topics)).unwrap();
        assert_eq!(one.aggregate.map, one.per_query[0].ap);
        assert_eq!(one.aggregate.bpref, one.per_query[0].bpref);
    }

    #[test]
    fn empty_run() {
        let qrels = Qrels::parse("1 0 a 1\n", "q").unwrap();
        let report = evaluate(&[], &qrels, None).unwrap();
        assert_eq!(report.aggregate.map, 0.0);
        assert!(report.to_table().contains("MAP 0.0000"));
        assert_eq!(report.pr_curve_csv().lines().count(), 12);
    }

    #[test]
    fn duplicate_document_rejected() {
        let qrels = Qrels::parse("1 0 a 1\n", "q").unwrap();
        let run = parse_run("1 Q0 a 1 2.0 t\n1 Q0 a 2 1.0 t\n", "r").unwrap();
        assert!(matches!(
            evaluate(&run, &qrels, None),
            Err(EvalError::DuplicateDocument { .. })
        ));
    }
}
