use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::json;

use qexpand::evaluation::{evaluate, relative_improvement, MetricsReport, Qrels, TopicSet};
use qexpand::retrieval::{build_index, load_collection, read_run, InvertedIndex};
use qexpand::websource::{
    fetch_documents, variant_label, DirectoryFetcher, FetchRequest, Snapshot, SnapshotMeta,
    UrlListProvider,
};

use crate::cli::{Cli, Command};
use crate::config::{require, ExperimentConfig};
use crate::pipeline::{
    expand_topics, expansion_report, read_expanded, run_text, search_topics, write_expanded,
};
use crate::sweep::{run_sweep, write_sweep_csv, Axis, SweepInputs};

/// How a command finished when it did not fail outright.
#[derive(Debug)]
pub enum Outcome {
    Done,
    /// Finished, but some queries failed; carries a JSON summary.
    Partial(serde_json::Value),
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Done => 0,
            Outcome::Partial(_) => 2,
        }
    }
}

struct Env {
    cfg: ExperimentConfig,
    out_dir: PathBuf,
}

impl Env {
    fn out(&self, name: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.out_dir)
            .with_context(|| format!("creating {}", self.out_dir.display()))?;
        Ok(self.out_dir.join(name))
    }

    fn topics(&self) -> Result<TopicSet> {
        Ok(TopicSet::read(require(&self.cfg.paths.topics, "topics")?)?)
    }

    fn qrels(&self) -> Result<Qrels> {
        Ok(Qrels::read(require(&self.cfg.paths.qrels, "qrels")?)?)
    }

    fn snapshot(&self) -> Result<Snapshot> {
        Ok(Snapshot::read(require(
            &self.cfg.paths.snapshot,
            "snapshot",
        )?)?)
    }

    fn default_index_path(&self) -> PathBuf {
        self.cfg
            .paths
            .index
            .clone()
            .unwrap_or_else(|| self.out_dir.join("index.json"))
    }

    fn build_index(&self) -> Result<InvertedIndex> {
        let path = require(&self.cfg.paths.collection, "collection")?;
        let docs = load_collection(path)?;
        log::info!("indexing {} documents from {}", docs.len(), path.display());
        Ok(build_index(
            docs.into_iter().map(|d| (d.doc_id, d.text)),
            &self.cfg.indexing_analyzer()?,
        )?)
    }

    /// The saved index when one exists, otherwise one built in memory.
    fn index(&self) -> Result<InvertedIndex> {
        let path = self.default_index_path();
        if path.exists() {
            log::info!("loading index {}", path.display());
            return Ok(InvertedIndex::load(&path)?);
        }
        self.build_index()
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    cli.overrides.apply(&mut cfg)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    if let Some(seed) = cli.seed {
        log::info!("seed {seed} recorded; no step of the pipeline is randomized");
    }
    let env = Env {
        cfg: load_config(cli)?,
        out_dir: cli.out_dir.clone(),
    };
    match &cli.command {
        Command::Fetch => fetch(&env),
        Command::Expand { output } => expand(&env, output.as_deref()),
        Command::Index { output } => index(&env, output.as_deref()),
        Command::Search { expanded, tag } => search(&env, expanded.as_deref(), tag.as_deref()),
        Command::Eval { run, baseline } => eval(&env, run, baseline.as_deref()),
        Command::Sweep { axis, grid } => sweep(&env, *axis, grid.as_deref()),
    }
}

fn fetch(env: &Env) -> Result<Outcome> {
    let cfg = &env.cfg;
    let provider = UrlListProvider::from_file(require(&cfg.paths.urls, "urls")?)?;
    let fetcher = DirectoryFetcher::new(require(&cfg.paths.mirror, "mirror")?);
    let snapshot_path = cfg
        .paths
        .snapshot
        .clone()
        .context("paths.snapshot is not set (config file or --snapshot)")?;
    let existing = if snapshot_path.exists() {
        Some(Snapshot::read(&snapshot_path)?)
    } else {
        None
    };
    let requests: Vec<FetchRequest> = env
        .topics()?
        .iter()
        .map(|(id, title)| FetchRequest {
            query_id: id.to_string(),
            query: title.to_string(),
        })
        .collect();
    let n = cfg.fetch.n_results.unwrap_or(cfg.expansion.n_docs);
    let outcome = fetch_documents(
        &requests,
        &cfg.expansion.engines,
        n,
        &provider,
        &fetcher,
        &cfg.blocklist()?,
        existing.as_ref(),
        cfg.fetch.max_in_flight,
        cfg.fetch.keep_html,
        chrono::Utc::now(),
    );

    let mut documents = outcome.documents;
    let mut meta = None;
    if let Some(old) = &existing {
        let key = |d: &qexpand::websource::WebDocument| {
            (
                d.entry.query_id.clone(),
                d.entry.engine.clone(),
                d.entry.rank,
            )
        };
        let present: HashSet<_> = documents.iter().map(key).collect();
        documents.extend(
            old.entries()
                .iter()
                .filter(|d| !present.contains(&key(d)))
                .cloned(),
        );
        if outcome.new_fetches == 0 {
            meta.clone_from(&old.meta);
        }
    }
    let meta = meta.or_else(|| {
        Some(SnapshotMeta {
            created_at: chrono::Utc::now(),
            provider: "url-list".into(),
            n_requested: n as u32,
        })
    });
    let snapshot = Snapshot::new(meta, documents)?;
    if let Some(dir) = snapshot_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    snapshot.write(&snapshot_path)?;

    let summary = json!({
        "command": "fetch",
        "snapshot": snapshot_path.display().to_string(),
        "documents": snapshot.len(),
        "new_fetches": outcome.new_fetches,
        "failed_fetches": outcome.failures.len(),
        "provider_failures": outcome.provider_failures.len(),
    });
    println!("{summary}");
    Ok(Outcome::Done)
}

fn expand(env: &Env, output: Option<&Path>) -> Result<Outcome> {
    let cfg = &env.cfg;
    let topics = env.topics()?;
    let snapshot = env.snapshot()?;
    let result = expand_topics(
        &topics,
        &snapshot,
        &cfg.expansion,
        &cfg.expansion_analyzer()?,
    );

    let path = match output {
        Some(p) => p.to_path_buf(),
        None => env.out("expanded.jsonl")?,
    };
    write_expanded(BufWriter::new(File::create(&path)?), &result.expanded)?;
    let report = expansion_report(&result.expanded, &topics, &cfg.expansion);
    write_file(&env.out("expansion_report.txt")?, &report)?;
    print!("{report}");
    log::info!(
        "wrote {} expanded queries to {}",
        result.expanded.len(),
        path.display()
    );

    if result.failures.is_empty() {
        return Ok(Outcome::Done);
    }
    Ok(Outcome::Partial(json!({
        "command": "expand",
        "expanded": result.expanded.len(),
        "failed_queries": result.failures,
    })))
}

fn index(env: &Env, output: Option<&Path>) -> Result<Outcome> {
    let index = env.build_index()?;
    let path = output.map_or_else(|| env.default_index_path(), Path::to_path_buf);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    index.save(&path)?;
    let stats = index.collection_stats();
    println!(
        "{}",
        json!({
            "command": "index",
            "index": path.display().to_string(),
            "documents": stats.doc_count,
            "terms": index.term_count(),
            "avg_doc_length": stats.avg_doc_length,
        })
    );
    Ok(Outcome::Done)
}

fn search(env: &Env, expanded: Option<&Path>, tag: Option<&str>) -> Result<Outcome> {
    let cfg = &env.cfg;
    let topics = env.topics()?;
    let index = env.index()?;
    let analyzer = cfg.indexing_analyzer()?;
    let expanded = expanded.map(read_expanded).transpose()?;
    let variant = match &expanded {
        None => "baseline".to_string(),
        Some(e) => e.first().map_or_else(
            || "expanded".to_string(),
            |q| variant_label(&q.provenance.engines),
        ),
    };

    let mut written = Vec::new();
    let mut fallbacks = Vec::new();
    for name in &cfg.retrieval.models {
        let model = cfg.model(name)?;
        let outcome = search_topics(
            &index,
            &topics,
            expanded.as_deref(),
            model.as_ref(),
            cfg.retrieval.beta,
            cfg.retrieval.r_max,
            &analyzer,
        )?;
        let run_tag = match tag {
            Some(t) if cfg.retrieval.models.len() == 1 => t.to_string(),
            Some(t) => format!("{t}-{}", model.name()),
            None => format!("{}-{variant}", model.name()),
        };
        let path = env.out(&format!("{run_tag}.run"))?;
        write_file(&path, &run_text(&outcome.lists, &run_tag))?;
        println!("{}", path.display());
        written.push(path.display().to_string());
        fallbacks = outcome.fallbacks;
    }

    if fallbacks.is_empty() {
        return Ok(Outcome::Done);
    }
    Ok(Outcome::Partial(json!({
        "command": "search",
        "runs": written,
        "title_only_queries": fallbacks,
    })))
}

const COMPARED: [&str; 8] = ["MAP", "GM_MAP", "P@5", "P@10", "P@20", "P@30", "bpref", "F"];

fn headline(r: &MetricsReport) -> [f64; 8] {
    let a = &r.aggregate;
    [a.map, a.gm_map, a.p5, a.p10, a.p20, a.p30, a.bpref, a.f]
}

/// Side-by-side aggregate metrics with the relative change of each.
pub fn comparison_table(run: &MetricsReport, baseline: &MetricsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<8} {:>9} {:>9} {:>10}",
        "metric", "baseline", "run", "change"
    );
    for ((name, new), old) in COMPARED.iter().zip(headline(run)).zip(headline(baseline)) {
        let change = match relative_improvement(new, old) {
            Ok(pct) if pct > 0.0 => format!("↑ {pct:.2}%"),
            Ok(pct) if pct < 0.0 => format!("↓ {:.2}%", -pct),
            Ok(_) => "= 0.00%".to_string(),
            Err(_) => "n/a".to_string(),
        };
        let _ = writeln!(out, "{name:<8} {old:>9.4} {new:>9.4} {change:>10}");
    }
    out
}

fn eval(env: &Env, run_path: &Path, baseline: Option<&Path>) -> Result<Outcome> {
    let qrels = env.qrels()?;
    let topics = match &env.cfg.paths.topics {
        Some(_) => Some(env.topics()?),
        None => None,
    };
    let evaluate_file = |p: &Path| -> Result<MetricsReport> {
        Ok(evaluate(&read_run(p)?, &qrels, topics.as_ref())?)
    };

    let report = evaluate_file(run_path)?;
    let mut text = report.to_table();
    if let Some(b) = baseline {
        let base = evaluate_file(b)?;
        let _ = writeln!(text, "\ncompared with {}", b.display());
        text.push_str(&comparison_table(&report, &base));
    }
    print!("{text}");

    let stem = run_path
        .file_stem()
        .map_or_else(|| "run".to_string(), |s| s.to_string_lossy().into_owned());
    write_file(&env.out(&format!("{stem}.eval.txt"))?, &text)?;
    write_file(&env.out(&format!("{stem}.eval.json"))?, &report.to_json())?;
    write_file(&env.out(&format!("{stem}.pr.csv"))?, &report.pr_curve_csv())?;
    Ok(Outcome::Done)
}

fn sweep(env: &Env, axis: Axis, grid: Option<&[usize]>) -> Result<Outcome> {
    let cfg = &env.cfg;
    let grid = grid.unwrap_or(match axis {
        Axis::Docs => &cfg.sweep.docs_grid,
        Axis::Terms => &cfg.sweep.terms_grid,
    });
    let index = env.index()?;
    let snapshot = env.snapshot()?;
    let topics = env.topics()?;
    let qrels = env.qrels()?;
    let expansion_analyzer = cfg.expansion_analyzer()?;
    let indexing_analyzer = cfg.indexing_analyzer()?;
    let inputs = SweepInputs {
        config: cfg,
        index: &index,
        snapshot: &snapshot,
        topics: &topics,
        qrels: &qrels,
        expansion_analyzer: &expansion_analyzer,
        indexing_analyzer: &indexing_analyzer,
    };
    let rows = run_sweep(&inputs, axis, grid, cfg.sweep.threads)?;
    for name in &cfg.retrieval.models {
        let model = cfg.model(name)?;
        let model_rows: Vec<_> = rows
            .iter()
            .filter(|r| r.model == model.name())
            .cloned()
            .collect();
        let path = env.out(&format!("sweep_{axis}_{}.csv", model.name()))?;
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &model_rows)?;
        std::fs::write(&path, &buf).with_context(|| format!("writing {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(Outcome::Done)
}
