use std::path::Path;

use super::{SerpEntry, WebSourceError};

const DEFAULT_PATTERNS: &[&str] = &[
    // advertising
    "doubleclick.net",
    "googleadservices.com",
    "googlesyndication.com",
    "adservice.google.com",
    "ads.yahoo.com",
    "bat.bing.com",
    "taboola.com",
    "outbrain.com",
    // video
    "youtube.com",
    "youtu.be",
    "vimeo.com",
    "dailymotion.com",
    "netflix.com",
    "hotstar.com",
    "twitch.tv",
    "tiktok.com",
    // e-commerce
    "amazon.com",
    "amazon.in",
    "amazon.co.uk",
    "ebay.com",
    "ebay.in",
    "flipkart.com",
    "snapdeal.com",
    "alibaba.com",
    "aliexpress.com",
    "walmart.com",
    "etsy.com",
    "myntra.com",
    "shopclues.com",
    "indiamart.com",
];

/// Domain-suffix patterns for hosts that never contribute documents.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Blocklist {
    patterns: Vec<String>,
}

impl Blocklist {
    pub fn new<I, S>(patterns: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let patterns = patterns
            .into_iter()
            .map(|p| {
                p.as_ref()
                    .trim()
                    .trim_start_matches("*.")
                    .trim_start_matches('.')
                    .to_ascii_lowercase()
            })
            .filter(|p| !p.is_empty())
            .collect();
        Self { patterns }
    }

    /// Common advertising, video and e-commerce domains.
    pub fn default_sites() -> Self {
        Self::new(DEFAULT_PATTERNS)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// One pattern per line; `#` starts a comment.
    pub fn parse(text: &str) -> Self {
        Self::new(
            text.lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty()),
        )
    }

    pub fn from_file(path: &Path) -> Result<Self, WebSourceError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| WebSourceError::io(path.display(), e))?;
        Ok(Self::parse(&text))
    }

    pub fn extend(&mut self, other: &Blocklist) {
        self.patterns.extend(other.patterns.iter().cloned());
    }

    pub fn patterns(&self) -> &[String] {
        &self.patterns
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// True when the URL's host equals a pattern or is a subdomain of it.
    /// URLs without a parseable host never match.
    pub fn matches(&self, url: &str) -> bool {
        if self.patterns.is_empty() {
            return false;
        }
        let Some(host) = url::Url::parse(url)
            .ok()
            .and_then(|u| u.host_str().map(|h| h.to_ascii_lowercase()))
        else {
            return false;
        };
        let host = host.trim_end_matches('.');
        self.patterns.iter().any(|p| {
            host == p
                || (host.len() > p.len()
                    && host.ends_with(p.as_str())
                    && host.as_bytes()[host.len() - p.len() - 1] == b'.')
        })
    }
}

/// Drops blocked entries and renumbers the survivors 1.. in their original
/// order. Ranks are renumbered per (query, engine) pair.
pub fn filter_urls(entries: &[SerpEntry], blocklist: &Blocklist) -> Vec<SerpEntry> {
    let mut next_rank: Vec<((&str, &str), u32)> = Vec::new();
    let mut out = Vec::with_capacity(entries.len());
    for e in entries.iter().filter(|e| !blocklist.matches(&e.url)) {
        let key = (e.query_id.as_str(), e.engine.as_str());
        let rank = match next_rank.iter_mut().find(|(k, _)| *k == key) {
            Some((_, r)) => {
                *r += 1;
                *r
            }
            None => {
                next_rank.push((key, 1));
                1
            }
        };
        out.push(SerpEntry { rank, ..e.clone() });
    }
    out
}
