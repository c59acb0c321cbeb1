use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use qexpand::websource::EngineId;

use crate::config::{ExperimentConfig, CONFIG_KEYS};
use crate::sweep::Axis;

#[derive(Debug, Parser)]
#[command(
    name = "qexpand",
    version,
    about = "Query expansion from web search results: fetch, expand, index, search, evaluate, sweep",
    after_long_help = CONFIG_KEYS
)]
pub struct Cli {
    /// TOML experiment config.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for every output artifact.
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,
    /// Reserved; the pipeline is deterministic and draws no random numbers.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Acquire result URLs, fetch the pages and write the snapshot.
    #[command(after_long_help = CONFIG_KEYS)]
    Fetch,
    /// Expand every topic from the snapshot.
    #[command(after_long_help = CONFIG_KEYS)]
    Expand {
        /// Expanded-query JSONL [default: <out-dir>/expanded.jsonl]
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Index the target collection.
    #[command(after_long_help = CONFIG_KEYS)]
    Index {
        /// Index file [default: paths.index or <out-dir>/index.json]
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Rank the collection for every topic, one run file per model.
    #[command(after_long_help = CONFIG_KEYS)]
    Search {
        /// Expanded-query JSONL; without it the topic titles are searched.
        #[arg(long)]
        expanded: Option<PathBuf>,
        /// Run tag [default: <model>-baseline or <model>-<variant>]
        #[arg(long)]
        tag: Option<String>,
    },
    /// Evaluate a run, optionally against a baseline run.
    #[command(after_long_help = CONFIG_KEYS)]
    Eval {
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        baseline: Option<PathBuf>,
    },
    /// MAP over a grid of N (docs) or n (terms) values.
    #[command(after_long_help = CONFIG_KEYS)]
    Sweep {
        #[arg(long, value_enum)]
        axis: Axis,
        /// Comma-separated grid [default: sweep.docs_grid / sweep.terms_grid]
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<usize>>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Fetch => "fetch",
            Command::Expand { .. } => "expand",
            Command::Index { .. } => "index",
            Command::Search { .. } => "search",
            Command::Eval { .. } => "eval",
            Command::Sweep { .. } => "sweep",
        }
    }
}

/// Flags that override config-file values.
#[derive(Debug, Default, Args)]
pub struct Overrides {
    #[arg(long, global = true, help_heading = "Overrides")]
    pub snapshot: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Overrides")]
    pub collection: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Overrides")]
    pub topics: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Overrides")]
    pub qrels: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Overrides")]
    pub urls: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Overrides")]
    pub mirror: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Overrides")]
    pub blocklist: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Overrides")]
    pub index: Option<PathBuf>,
    /// Comma-separated engine ids.
    #[arg(long, global = true, value_delimiter = ',', help_heading = "Overrides")]
    pub engines: Option<Vec<String>>,
    /// Pseudo-relevant documents per engine (N).
    #[arg(long, global = true, help_heading = "Overrides")]
    pub n_docs: Option<usize>,
    /// Intermediate tf-itf candidates (M).
    #[arg(long = "m", global = true, help_heading = "Overrides")]
    pub m_intermediate: Option<usize>,
    #[arg(long, global = true, help_heading = "Overrides")]
    pub k: Option<usize>,
    #[arg(long, global = true, help_heading = "Overrides")]
    pub l: Option<usize>,
    #[arg(long, global = true, help_heading = "Overrides")]
    pub r0: Option<usize>,
    /// Expansion terms kept (n).
    #[arg(long, global = true, help_heading = "Overrides")]
    pub n_final: Option<usize>,
    #[arg(long, global = true, help_heading = "Overrides")]
    pub dedup: Option<bool>,
    /// Comma-separated weighting models.
    #[arg(long, global = true, value_delimiter = ',', help_heading = "Overrides")]
    pub models: Option<Vec<String>>,
    #[arg(long, global = true, help_heading = "Overrides")]
    pub beta: Option<f64>,
    #[arg(long, global = true, help_heading = "Overrides")]
    pub r_max: Option<usize>,
    #[arg(long, global = true, help_heading = "Overrides")]
    pub stoplist: Option<String>,
    /// Sweep worker threads (0 = all cores).
    #[arg(long, global = true, help_heading = "Overrides")]
    pub threads: Option<usize>,
    #[arg(long, global = true, help_heading = "Overrides")]
    pub n_results: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ExperimentConfig) -> Result<()> {
        let p = &mut cfg.paths;
        for (slot, value) in [
            (&mut p.snapshot, &self.snapshot),
            (&mut p.collection, &self.collection),
            (&mut p.topics, &self.topics),
            (&mut p.qrels, &self.qrels),
            (&mut p.urls, &self.urls),
            (&mut p.mirror, &self.mirror),
            (&mut p.blocklist, &self.blocklist),
            (&mut p.index, &self.index),
        ] {
            if value.is_some() {
                slot.clone_from(value);
            }
        }
        let e = &mut cfg.expansion;
        if let Some(v) = &self.engines {
            e.engines = v.iter().map(EngineId::new).collect::<Result<_, _>>()?;
        }
        macro_rules! set {
            ($($field:expr => $value:expr),* $(,)?) => {
                $(if let Some(v) = $value { $field = v; })*
            };
        }
        set! {
            e.n_docs => self.n_docs,
            e.m_intermediate => self.m_intermediate,
            e.knn.k => self.k,
            e.knn.l => self.l,
            e.knn.r0 => self.r0,
            e.n_final => self.n_final,
            e.dedup => self.dedup,
            cfg.retrieval.beta => self.beta,
            cfg.retrieval.r_max => self.r_max,
            cfg.sweep.threads => self.threads,
        }
        if let Some(m) = &self.models {
            cfg.retrieval.models.clone_from(m);
        }
        if let Some(s) = &self.stoplist {
            cfg.analyzer.stoplist.clone_from(s);
        }
        if self.n_results.is_some() {
            cfg.fetch.n_results = self.n_results;
        }
        Ok(())
    }
}
