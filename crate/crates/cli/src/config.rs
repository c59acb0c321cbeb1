use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use qexpand::expansion::ExpansionConfig;
use qexpand::retrieval::{model_by_name, WeightingModel, DEFAULT_R_MAX};
use qexpand::textproc::{AnalyzerConfig, StopList};
use qexpand::websource::Blocklist;

pub const DEFAULT_GRID: [usize; 7] = [5, 10, 15, 20, 25, 30, 50];

/// Every key accepted in the TOML config, shown in `--help`.
pub const CONFIG_KEYS: &str = "\
Config keys (TOML; relative paths resolve against the config file's directory):
  [paths]      snapshot, collection, topics, qrels, urls, mirror, blocklist, index
  [expansion]  n_docs, m_intermediate, n_final, engines, dedup,
               knn.k, knn.l, knn.r0
  [retrieval]  models, beta, r_max, params.<model>.<name> (bm25: k1, b)
  [analyzer]   stoplist (\"smart\", \"none\" or a file), min_len, max_len, drop_numeric
  [sweep]      docs_grid, terms_grid, threads
  [fetch]      n_results, max_in_flight, keep_html
Command-line flags override file values.";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub snapshot: Option<PathBuf>,
    pub collection: Option<PathBuf>,
    pub topics: Option<PathBuf>,
    pub qrels: Option<PathBuf>,
    /// `query_id<TAB>engine<TAB>rank<TAB>url` list used by `fetch`.
    pub urls: Option<PathBuf>,
    /// Local page mirror used by `fetch`.
    pub mirror: Option<PathBuf>,
    pub blocklist: Option<PathBuf>,
    /// Prebuilt index; defaults to `<out-dir>/index.json`.
    pub index: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RetrievalSettings {
    pub models: Vec<String>,
    /// Weight of the strongest expansion term; original terms weigh 1.
    pub beta: f64,
    pub r_max: usize,
    pub params: BTreeMap<String, BTreeMap<String, f64>>,
}

impl Default for RetrievalSettings {
    fn default() -> Self {
        Self {
            models: vec!["bm25".into(), "tfidf".into()],
            beta: 0.5,
            r_max: DEFAULT_R_MAX,
            params: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyzerSettings {
    pub stoplist: String,
    pub min_len: usize,
    pub max_len: usize,
    pub drop_numeric: bool,
}

impl Default for AnalyzerSettings {
    fn default() -> Self {
        let a = AnalyzerConfig::expansion();
        Self {
            stoplist: "smart".into(),
            min_len: a.min_len,
            max_len: a.max_len,
            drop_numeric: a.drop_numeric,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSettings {
    pub docs_grid: Vec<usize>,
    pub terms_grid: Vec<usize>,
    /// Worker threads; 0 uses every core.
    pub threads: usize,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            docs_grid: DEFAULT_GRID.to_vec(),
            terms_grid: DEFAULT_GRID.to_vec(),
            threads: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FetchSettings {
    /// Results kept per query and engine; defaults to `expansion.n_docs`.
    pub n_results: Option<usize>,
    pub max_in_flight: usize,
    pub keep_html: bool,
}

impl Default for FetchSettings {
    fn default() -> Self {
        Self {
            n_results: None,
            max_in_flight: 8,
            keep_html: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub paths: Paths,
    pub expansion: ExpansionConfig,
    pub retrieval: RetrievalSettings,
    pub analyzer: AnalyzerSettings,
    pub sweep: SweepSettings,
    pub fetch: FetchSettings,
}

impl ExperimentConfig {
    /// Reads a TOML config; relative paths are resolved against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: Self =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.paths.resolve(base);
        if cfg.analyzer.stoplist != "smart" && cfg.analyzer.stoplist != "none" {
            cfg.analyzer.stoplist = base.join(&cfg.analyzer.stoplist).display().to_string();
        }
        Ok(cfg)
    }

    fn analyzer(&self, stemming: bool) -> Result<AnalyzerConfig> {
        let stoplist = match self.analyzer.stoplist.as_str() {
            "smart" => StopList::smart(),
            "none" => StopList::empty(),
            path => StopList::from_file(Path::new(path))?,
        };
        let a = AnalyzerConfig {
            stoplist,
            stemming,
            min_len: self.analyzer.min_len,
            max_len: self.analyzer.max_len,
            drop_numeric: self.analyzer.drop_numeric,
        };
        a.validate()?;
        Ok(a)
    }

    /// Unstemmed analyzer used to mine expansion terms.
    pub fn expansion_analyzer(&self) -> Result<AnalyzerConfig> {
        self.analyzer(false)
    }

    /// Stemming analyzer used for the target collection and its queries.
    pub fn indexing_analyzer(&self) -> Result<AnalyzerConfig> {
        self.analyzer(true)
    }

    pub fn model(&self, name: &str) -> Result<Box<dyn WeightingModel>> {
        let empty = BTreeMap::new();
        let params = self
            .retrieval
            .params
            .get(&name.to_ascii_lowercase())
            .unwrap_or(&empty);
        Ok(model_by_name(name, params)?)
    }

    pub fn blocklist(&self) -> Result<Blocklist> {
        let mut b = Blocklist::default_sites();
        if let Some(p) = &self.paths.blocklist {
            b.extend(&Blocklist::from_file(p)?);
        }
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        self.expansion.validate()?;
        if !(self.retrieval.beta >= 0.0 && self.retrieval.beta.is_finite()) {
            bail!("retrieval.beta must be a non-negative number");
        }
        if self.retrieval.r_max == 0 {
            bail!("retrieval.r_max must be at least 1");
        }
        if self.retrieval.models.is_empty() {
            bail!("retrieval.models must name at least one model");
        }
        for m in &self.retrieval.models {
            self.model(m)?;
        }
        self.indexing_analyzer()?;
        Ok(())
    }
}

impl Paths {
    fn resolve(&mut self, base: &Path) {
        for p in [
            &mut self.snapshot,
            &mut self.collection,
            &mut self.topics,
            &mut self.qrels,
            &mut self.urls,
            &mut self.mirror,
            &mut self.blocklist,
            &mut self.index,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
}

/// Returns the path or a "missing setting" error naming the key.
pub fn require<'a>(path: &'a Option<PathBuf>, key: &str) -> Result<&'a Path> {
    let p = path
        .as_deref()
        .with_context(|| format!("paths.{key} is not set (config file or --{key})"))?;
    if !p.exists() {
        bail!("paths.{key} = {} does not exist", p.display());
    }
    Ok(p)
}
