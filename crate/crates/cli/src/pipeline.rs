use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use qexpand::evaluation::{evaluate, MetricsReport, Qrels, TopicSet};
use qexpand::expansion::{expand_query, ExpandedQuery, ExpansionConfig, Query};
use qexpand::retrieval::{
    parse_run, query_from_expansion, query_from_title, search, write_run, InvertedIndex,
    RankedList, WeightingModel,
};
use qexpand::textproc::AnalyzerConfig;
use qexpand::websource::{variant_label, Snapshot};

/// A query that could not be processed, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryFailure {
    pub query_id: String,
    pub error: String,
}

#[derive(Debug, Clone, Default)]
pub struct ExpandOutcome {
    pub expanded: Vec<ExpandedQuery>,
    pub failures: Vec<QueryFailure>,
}

/// Expands every topic title; failing topics are logged and collected.
pub fn expand_topics(
    topics: &TopicSet,
    snapshot: &Snapshot,
    config: &ExpansionConfig,
    analyzer: &AnalyzerConfig,
) -> ExpandOutcome {
    let mut out = ExpandOutcome::default();
    for (qid, title) in topics.iter() {
        let result = Query::from_title(qid, title, analyzer)
            .and_then(|q| expand_query(&q, snapshot, config, analyzer));
        match result {
            Ok(e) => out.expanded.push(e),
            Err(e) => {
                log::warn!("query {qid}: expansion failed: {e}");
                out.failures.push(QueryFailure {
                    query_id: qid.to_string(),
                    error: e.to_string(),
                });
            }
        }
    }
    out
}

pub fn write_expanded<W: Write>(mut w: W, expanded: &[ExpandedQuery]) -> Result<()> {
    for e in expanded {
        serde_json::to_writer(&mut w, e)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_expanded(path: &Path) -> Result<Vec<ExpandedQuery>> {
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line).with_context(|| format!("{}:{}", path.display(), i + 1))?,
        );
    }
    Ok(out)
}

/// Expansion terms per topic, one block per query, headed by the variant
/// label (e.g. `GBDQE` for all three default engines).
pub fn expansion_report(
    expanded: &[ExpandedQuery],
    topics: &TopicSet,
    config: &ExpansionConfig,
) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Expansion terms: {} (N={}, M={}, k={}, l={}, r0={}, n={})",
        variant_label(&config.engines),
        config.n_docs,
        config.m_intermediate,
        config.knn.k,
        config.knn.l,
        config.knn.r0,
        config.n_final
    );
    for e in expanded {
        let id = e.original.id();
        let _ = writeln!(out, "\n{id}\t{}", topics.title(id).unwrap_or(""));
        let terms: Vec<String> = e
            .expansion
            .iter()
            .map(|(t, s)| format!("{t} ({s:.4})"))
            .collect();
        for chunk in terms.chunks(5) {
            let _ = writeln!(out, "\t{}", chunk.join(", "));
        }
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct SearchOutcome {
    pub lists: Vec<RankedList>,
    /// Topics searched with their plain title because no expansion existed.
    pub fallbacks: Vec<String>,
}

/// Searches every topic. With `expanded`, a topic's expansion terms join its
/// title terms with weights scaled by `beta`; topics without an expansion
/// fall back to the title.
pub fn search_topics(
    index: &InvertedIndex,
    topics: &TopicSet,
    expanded: Option<&[ExpandedQuery]>,
    model: &dyn WeightingModel,
    beta: f64,
    r_max: usize,
    analyzer: &AnalyzerConfig,
) -> Result<SearchOutcome> {
    let by_id: HashMap<&str, &ExpandedQuery> = expanded
        .unwrap_or_default()
        .iter()
        .map(|e| (e.original.id(), e))
        .collect();
    let mut out = SearchOutcome::default();
    for (qid, title) in topics.iter() {
        let query = match (expanded, by_id.get(qid)) {
            (Some(_), Some(e)) => query_from_expansion(e, beta, analyzer)?,
            (Some(_), None) => {
                log::warn!("query {qid}: no expansion available, searching the title only");
                out.fallbacks.push(qid.to_string());
                query_from_title(title, analyzer)
            }
            (None, _) => query_from_title(title, analyzer),
        };
        out.lists.push(search(qid, &query, index, model, r_max));
    }
    Ok(out)
}

pub fn run_text(lists: &[RankedList], tag: &str) -> String {
    let mut buf = Vec::new();
    write_run(&mut buf, lists, tag).expect("writing to memory");
    String::from_utf8(buf).expect("run text is UTF-8")
}

/// Evaluates lists exactly as a run file written from them would be.
pub fn evaluate_as_written(
    lists: &[RankedList],
    qrels: &Qrels,
    topics: &TopicSet,
) -> Result<MetricsReport> {
    let parsed = parse_run(&run_text(lists, "mem"), "run")?;
    Ok(evaluate(&parsed, qrels, Some(topics))?)
}
