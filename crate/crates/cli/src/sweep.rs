use std::fmt;
use std::io::Write;

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::Serialize;

use qexpand::evaluation::{Qrels, TopicSet};
use qexpand::expansion::ExpansionConfig;
use qexpand::retrieval::InvertedIndex;
use qexpand::textproc::AnalyzerConfig;
use qexpand::websource::Snapshot;

use crate::config::ExperimentConfig;
use crate::pipeline::{evaluate_as_written, expand_topics, search_topics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Axis {
    /// Pseudo-relevant documents per engine (N).
    Docs,
    /// Expansion terms kept (n).
    Terms,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Docs => "docs",
            Axis::Terms => "terms",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis: String,
    pub value: usize,
    pub model: String,
    pub map: f64,
    pub failed_queries: usize,
}

/// Expansion settings for one grid point. On the terms axis `k` is raised
/// to `n` when `n > k`, and `M` to `k + l·r0` when needed, so that every
/// grid value is a valid configuration.
pub fn grid_point(base: &ExpansionConfig, axis: Axis, value: usize) -> ExpansionConfig {
    let mut cfg = base.clone();
    match axis {
        Axis::Docs => cfg.n_docs = value,
        Axis::Terms => {
            cfg.n_final = value;
            if cfg.knn.k < value {
                cfg.knn.k = value;
            }
            cfg.m_intermediate = cfg.m_intermediate.max(cfg.knn.required_candidates());
        }
    }
    cfg
}

/// Inputs shared by every grid point.
pub struct SweepInputs<'a> {
    pub config: &'a ExperimentConfig,
    pub index: &'a InvertedIndex,
    pub snapshot: &'a Snapshot,
    pub topics: &'a TopicSet,
    pub qrels: &'a Qrels,
    pub expansion_analyzer: &'a AnalyzerConfig,
    pub indexing_analyzer: &'a AnalyzerConfig,
}

fn run_point(inputs: &SweepInputs<'_>, axis: Axis, value: usize) -> Result<Vec<SweepRow>> {
    let cfg = grid_point(&inputs.config.expansion, axis, value);
    cfg.validate()?;
    let expanded = expand_topics(
        inputs.topics,
        inputs.snapshot,
        &cfg,
        inputs.expansion_analyzer,
    );
    let mut rows = Vec::new();
    for name in &inputs.config.retrieval.models {
        let model = inputs.config.model(name)?;
        let searched = search_topics(
            inputs.index,
            inputs.topics,
            Some(&expanded.expanded),
            model.as_ref(),
            inputs.config.retrieval.beta,
            inputs.config.retrieval.r_max,
            inputs.indexing_analyzer,
        )?;
        let report = evaluate_as_written(&searched.lists, inputs.qrels, inputs.topics)?;
        rows.push(SweepRow {
            axis: axis.to_string(),
            value,
            model: model.name().to_string(),
            map: report.aggregate.map,
            failed_queries: expanded.failures.len(),
        });
    }
    Ok(rows)
}

/// Runs the pipeline for every grid value on `threads` workers (0 = all
/// cores). Rows come back in grid order, then model order.
pub fn run_sweep(
    inputs: &SweepInputs<'_>,
    axis: Axis,
    grid: &[usize],
    threads: usize,
) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        bail!("the {axis} grid is empty");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()?;
    let points: Vec<Result<Vec<SweepRow>>> = pool.install(|| {
        grid.par_iter()
            .map(|&v| run_point(inputs, axis, v))
            .collect()
    });
    let mut rows = Vec::new();
    for p in points {
        rows.extend(p?);
    }
    Ok(rows)
}

/// CSV with a header row and 4-decimal MAP values.
pub fn write_sweep_csv<W: Write>(w: W, rows: &[SweepRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["axis", "value", "model", "map", "failed_queries"])?;
    for r in rows {
        out.write_record([
            r.axis.clone(),
            r.value.to_string(),
            r.model.clone(),
            format!("{:.4}", r.map),
            r.failed_queries.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
