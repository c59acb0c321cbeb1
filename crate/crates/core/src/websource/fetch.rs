use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use chrono::{DateTime, Utc};

use super::extract::{extract_plain, extract_text};
use super::{
    acquire_serp, filter_urls, Blocklist, EngineId, SerpEntry, SerpProvider, Snapshot, WebDocument,
    WebSourceError,
};

/// Raw response body plus its declared content type.
#[derive(Debug, Clone)]
pub struct FetchedPage {
    pub content_type: Option<String>,
    pub body: Vec<u8>,
}

pub trait PageFetcher: Send + Sync {
    fn fetch(&self, url: &str) -> Result<FetchedPage, WebSourceError>;
}

/// Serves pages from a local mirror laid out as `<root>/<host>/<path>`,
/// the layout produced by `wget --force-directories`. A path ending in `/`
/// maps to `index.html`.
#[derive(Debug, Clone)]
pub struct DirectoryFetcher {
    root: PathBuf,
}

impl DirectoryFetcher {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn path_for(&self, url: &str) -> Result<PathBuf, WebSourceError> {
        let parsed = url::Url::parse(url).map_err(|e| WebSourceError::Fetch {
            url: url.to_string(),
            message: e.to_string(),
        })?;
        let host = parsed.host_str().ok_or_else(|| WebSourceError::Fetch {
            url: url.to_string(),
            message: "url has no host".into(),
        })?;
        let mut path = self.root.join(host);
        let segments: Vec<&str> = parsed
            .path_segments()
            .map(|s| s.filter(|p| !p.is_empty() && *p != "..").collect())
            .unwrap_or_default();
        for seg in &segments {
            path.push(seg);
        }
        if parsed.path().ends_with('/') || segments.is_empty() {
            path.push("index.html");
        }
        Ok(path)
    }
}

impl PageFetcher for DirectoryFetcher {
    fn fetch(&self, url: &str) -> Result<FetchedPage, WebSourceError> {
        let path = self.path_for(url)?;
        let body = std::fs::read(&path).map_err(|e| WebSourceError::Fetch {
            url: url.to_string(),
            message: format!("{}: {e}", path.display()),
        })?;
        let content_type = match path.extension().and_then(|e| e.to_str()) {
            Some("html" | "htm") => Some("text/html"),
            Some("txt") => Some("text/plain"),
            Some("pdf") => Some("application/pdf"),
            Some("png") => Some("image/png"),
            Some("jpg" | "jpeg") => Some("image/jpeg"),
            _ => None,
        };
        Ok(FetchedPage {
            content_type: content_type.map(str::to_string),
            body,
        })
    }
}

/// A query to acquire documents for.
#[derive(Debug, Clone)]
pub struct FetchRequest {
    pub query_id: String,
    pub query: String,
}

#[derive(Debug, Default)]
pub struct FetchOutcome {
    /// Reused and newly fetched documents, sorted by (query, engine, rank).
    pub documents: Vec<WebDocument>,
    /// Pages actually requested from the fetcher in this run.
    pub new_fetches: usize,
    /// Entries dropped with the reason, in (query, engine, rank) order.
    pub failures: Vec<(SerpEntry, String)>,
    /// (query, engine) pairs for which the provider failed.
    pub provider_failures: Vec<(String, EngineId, String)>,
}

fn is_html(content_type: &str) -> bool {
    let ct = content_type.to_ascii_lowercase();
    ct.starts_with("text/html") || ct.starts_with("application/xhtml") || ct.contains("xml")
}

fn page_text(page: &FetchedPage) -> Result<String, String> {
    match page.content_type.as_deref() {
        None => extract_text(&page.body).map_err(|e| e.to_string()),
        Some(ct) if is_html(ct) => extract_text(&page.body).map_err(|e| e.to_string()),
        Some(ct) if ct.to_ascii_lowercase().starts_with("text/plain") => {
            extract_plain(&page.body).map_err(|e| e.to_string())
        }
        Some(ct) => Err(format!("skipped non-HTML content type {ct}")),
    }
}

/// Acquires the top `n` unblocked results per request and engine and
/// fetches every page not already present in `existing`. Up to
/// `max_in_flight` pages are fetched at once; the result order never
/// depends on completion order.
#[allow(clippy::too_many_arguments)]
pub fn fetch_documents(
    requests: &[FetchRequest],
    engines: &[EngineId],
    n: usize,
    provider: &dyn SerpProvider,
    fetcher: &dyn PageFetcher,
    blocklist: &Blocklist,
    existing: Option<&Snapshot>,
    max_in_flight: usize,
    keep_html: bool,
    now: DateTime<Utc>,
) -> FetchOutcome {
    let mut outcome = FetchOutcome::default();
    let mut pending: Vec<SerpEntry> = Vec::new();

    for req in requests {
        for engine in engines {
            let entries =
                match acquire_serp(&req.query_id, &req.query, engine, usize::MAX, provider) {
                    Ok(e) => e,
                    Err(e) => {
                        log::warn!("{} / {}: {e}", req.query_id, engine);
                        outcome.provider_failures.push((
                            req.query_id.clone(),
                            engine.clone(),
                            e.to_string(),
                        ));
                        continue;
                    }
                };
            for entry in filter_urls(&entries, blocklist).into_iter().take(n) {
                let cached = existing.and_then(|s| s.entries().iter().find(|d| d.entry == entry));
                match cached {
                    Some(doc) => outcome.documents.push(doc.clone()),
                    None => pending.push(entry),
                }
            }
        }
    }

    outcome.new_fetches = pending.len();
    let results: Mutex<Vec<Option<Result<WebDocument, String>>>> =
        Mutex::new(vec![None; pending.len()]);
    let next = AtomicUsize::new(0);
    let workers = max_in_flight.clamp(1, pending.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(entry) = pending.get(i) else { break };
                let result = fetcher
                    .fetch(&entry.url)
                    .map_err(|e| e.to_string())
                    .and_then(|page| {
                        let text = page_text(&page)?;
                        if text.trim().is_empty() {
                            return Err("no text extracted".to_string());
                        }
                        let raw_html =
                            keep_html.then(|| String::from_utf8_lossy(&page.body).into_owned());
                        Ok(WebDocument {
                            entry: entry.clone(),
                            raw_html,
                            extracted_text: text,
                            fetched_at: now,
                        })
                    });
                results.lock().expect("fetch result lock")[i] = Some(result);
            });
        }
    });

    for (entry, result) in pending
        .into_iter()
        .zip(results.into_inner().expect("fetch result lock"))
    {
        match result.expect("every job completes") {
            Ok(doc) => outcome.documents.push(doc),
            Err(msg) => {
                log::warn!(
                    "{} ({} rank {}): {msg}",
                    entry.url,
                    entry.engine,
                    entry.rank
                );
                outcome.failures.push((entry, msg));
            }
        }
    }
    let key = |e: &SerpEntry| (e.query_id.clone(), e.engine.clone(), e.rank);
    outcome.documents.sort_by_key(|d| key(&d.entry));
    outcome.failures.sort_by_key(|(e, _)| key(e));
    outcome
}
