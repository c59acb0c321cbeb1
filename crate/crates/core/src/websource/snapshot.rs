use std::collections::HashSet;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::{EngineId, SerpEntry, WebDocument, WebSourceError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub created_at: DateTime<Utc>,
    pub provider: String,
    pub n_requested: u32,
}

/// A frozen set of fetched documents, sorted by (query id, engine, rank).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub meta: Option<SnapshotMeta>,
    entries: Vec<WebDocument>,
}

#[derive(Serialize, Deserialize)]
struct Record {
    query_id: String,
    engine: EngineId,
    rank: u32,
    url: String,
    fetched_at: DateTime<Utc>,
    text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    html: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct MetaLine {
    snapshot: SnapshotMeta,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Line {
    Meta(MetaLine),
    Record(Record),
}

fn sort_key(d: &WebDocument) -> (&str, &str, u32) {
    (&d.entry.query_id, d.entry.engine.as_str(), d.entry.rank)
}

impl Snapshot {
    /// Sorts the documents and rejects duplicate (query, engine, rank)
    /// triples and documents with no text.
    pub fn new(
        meta: Option<SnapshotMeta>,
        mut entries: Vec<WebDocument>,
    ) -> Result<Self, WebSourceError> {
        entries.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)));
        let mut seen = HashSet::new();
        for d in &entries {
            if d.entry.rank == 0 {
                return Err(WebSourceError::InvalidArgument(format!(
                    "rank 0 for {} on {}",
                    d.entry.query_id, d.entry.engine
                )));
            }
            if !seen.insert(sort_key(d)) {
                return Err(WebSourceError::InvalidArgument(format!(
                    "duplicate rank {} for query {} on {}",
                    d.entry.rank, d.entry.query_id, d.entry.engine
                )));
            }
            if d.extracted_text.trim().is_empty() {
                return Err(WebSourceError::InvalidArgument(format!(
                    "empty text for {} ({} rank {})",
                    d.entry.url, d.entry.engine, d.entry.rank
                )));
            }
        }
        Ok(Self { meta, entries })
    }

    pub fn entries(&self) -> &[WebDocument] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Documents for one query and engine, in rank order.
    pub fn documents<'s, 'q>(
        &'s self,
        query_id: &'q str,
        engine: &'q EngineId,
    ) -> impl Iterator<Item = &'s WebDocument> + 'q
    where
        's: 'q,
    {
        self.entries
            .iter()
            .filter(move |d| d.entry.query_id == query_id && &d.entry.engine == engine)
    }

    pub fn contains(&self, entry: &SerpEntry) -> bool {
        self.entries.iter().any(|d| &d.entry == entry)
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, WebSourceError> {
        Self::read_lines(BufReader::new(text.as_bytes()), origin)
    }

    pub fn read(path: &Path) -> Result<Self, WebSourceError> {
        let file = std::fs::File::open(path).map_err(|e| WebSourceError::io(path.display(), e))?;
        Self::read_lines(BufReader::new(file), &path.display().to_string())
    }

    fn read_lines<R: BufRead>(reader: R, origin: &str) -> Result<Self, WebSourceError> {
        let mut meta = None;
        let mut entries = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| WebSourceError::io(origin, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed: Line = serde_json::from_str(&line).map_err(|e| WebSourceError::Parse {
                path: origin.to_string(),
                line: i + 1,
                message: e.to_string(),
            })?;
            match parsed {
                Line::Meta(m) => meta = Some(m.snapshot),
                Line::Record(r) => entries.push(WebDocument {
                    entry: SerpEntry {
                        query_id: r.query_id,
                        engine: r.engine,
                        rank: r.rank,
                        url: r.url,
                    },
                    raw_html: r.html,
                    extracted_text: r.text,
                    fetched_at: r.fetched_at,
                }),
            }
        }
        Self::new(meta, entries)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        if let Some(meta) = &self.meta {
            serde_json::to_writer(
                &mut w,
                &MetaLine {
                    snapshot: meta.clone(),
                },
            )?;
            w.write_all(b"\n")?;
        }
        for d in &self.entries {
            let record = Record {
                query_id: d.entry.query_id.clone(),
                engine: d.entry.engine.clone(),
                rank: d.entry.rank,
                url: d.entry.url.clone(),
                fetched_at: d.fetched_at,
                text: d.extracted_text.clone(),
                html: d.raw_html.clone(),
            };
            serde_json::to_writer(&mut w, &record)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_string_lossless(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("serde_json emits utf-8")
    }

    pub fn write(&self, path: &Path) -> Result<(), WebSourceError> {
        std::fs::write(path, self.to_string_lossless())
            .map_err(|e| WebSourceError::io(path.display(), e))
    }
}
