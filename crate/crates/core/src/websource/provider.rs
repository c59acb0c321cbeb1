use std::collections::BTreeMap;
use std::path::Path;

use super::{EngineId, SerpEntry, Snapshot, WebSourceError};

/// Source of ranked result URLs for a query on an engine.
pub trait SerpProvider: Send + Sync {
    fn name(&self) -> &str;

    /// All result URLs the provider knows for the query, best first.
    fn results(
        &self,
        query_id: &str,
        query: &str,
        engine: &EngineId,
    ) -> Result<Vec<String>, WebSourceError>;
}

/// Returns at most `n` entries ranked `1..` in provider order.
pub fn acquire_serp(
    query_id: &str,
    query: &str,
    engine: &EngineId,
    n: usize,
    provider: &dyn SerpProvider,
) -> Result<Vec<SerpEntry>, WebSourceError> {
    if n == 0 {
        return Err(WebSourceError::InvalidArgument(
            "n must be at least 1".into(),
        ));
    }
    let urls = provider.results(query_id, query, engine)?;
    if urls.is_empty() {
        return Err(WebSourceError::EmptyResult {
            query_id: query_id.to_string(),
            engine: engine.clone(),
        });
    }
    Ok(urls
        .into_iter()
        .take(n)
        .enumerate()
        .map(|(i, url)| SerpEntry {
            query_id: query_id.to_string(),
            engine: engine.clone(),
            rank: i as u32 + 1,
            url,
        })
        .collect())
}

/// Replays the URLs stored in a snapshot.
pub struct SnapshotProvider<'a> {
    snapshot: &'a Snapshot,
}

impl<'a> SnapshotProvider<'a> {
    pub fn new(snapshot: &'a Snapshot) -> Self {
        Self { snapshot }
    }
}

impl SerpProvider for SnapshotProvider<'_> {
    fn name(&self) -> &str {
        "snapshot"
    }

    fn results(
        &self,
        query_id: &str,
        _query: &str,
        engine: &EngineId,
    ) -> Result<Vec<String>, WebSourceError> {
        Ok(self
            .snapshot
            .documents(query_id, engine)
            .map(|d| d.entry.url.clone())
            .collect())
    }
}

/// URLs read from a `query_id <TAB> engine <TAB> rank <TAB> url` file.
#[derive(Debug, Clone, Default)]
pub struct UrlListProvider {
    lists: BTreeMap<(String, EngineId), Vec<(u32, String)>>,
}

impl UrlListProvider {
    pub fn parse(text: &str, origin: &str) -> Result<Self, WebSourceError> {
        let mut lists: BTreeMap<(String, EngineId), Vec<(u32, String)>> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| WebSourceError::Parse {
                path: origin.to_string(),
                line: i + 1,
                message,
            };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(err(format!(
                    "expected 4 tab-separated columns, found {}",
                    cols.len()
                )));
            }
            let engine = EngineId::new(cols[1].trim()).map_err(|e| err(e.to_string()))?;
            let rank: u32 = cols[2]
                .trim()
                .parse()
                .map_err(|_| err(format!("bad rank {:?}", cols[2])))?;
            let list = lists
                .entry((cols[0].trim().to_string(), engine))
                .or_default();
            if list.iter().any(|(r, _)| *r == rank) {
                return Err(err(format!("duplicate rank {rank}")));
            }
            list.push((rank, cols[3].trim().to_string()));
        }
        for list in lists.values_mut() {
            list.sort();
        }
        Ok(Self { lists })
    }

    pub fn from_file(path: &Path) -> Result<Self, WebSourceError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| WebSourceError::io(path.display(), e))?;
        Self::parse(&text, &path.display().to_string())
    }
}

impl SerpProvider for UrlListProvider {
    fn name(&self) -> &str {
        "url-list"
    }

    fn results(
        &self,
        query_id: &str,
        _query: &str,
        engine: &EngineId,
    ) -> Result<Vec<String>, WebSourceError> {
        Ok(self
            .lists
            .get(&(query_id.to_string(), engine.clone()))
            .map(|l| l.iter().map(|(_, u)| u.clone()).collect())
            .unwrap_or_default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1() -> EngineId {
        EngineId::new("e1").unwrap()
    }

    #[test]
    fn prefix_of_stored_list() {
        let text: String = (1..=5)
            .map(|r| format!("apple\te1\t{r}\thttps://site{r}.com/\n"))
            .collect();
        let p = UrlListProvider::parse(&text, "urls.tsv").unwrap();
        let got = acquire_serp("apple", "apple", &e1(), 3, &p).unwrap();
        assert_eq!(got.len(), 3);
        for (i, e) in got.iter().enumerate() {
            assert_eq!(e.rank as usize, i + 1);
            assert_eq!(e.url, format!("https://site{}.com/", i + 1));
        }
    }

    #[test]
    fn empty_result_is_error() {
        let p = UrlListProvider::default();
        assert!(matches!(
            acquire_serp("q", "anything", &e1(), 5, &p),
            Err(WebSourceError::EmptyResult { .. })
        ));
    }

    #[test]
    fn file_order_follows_rank_column() {
        let p = UrlListProvider::parse("q\te1\t2\tb\nq\te1\t1\ta\n", "x").unwrap();
        assert_eq!(p.results("q", "", &e1()).unwrap(), ["a", "b"]);
    }

    #[test]
    fn malformed_lines_rejected() {
        assert!(UrlListProvider::parse("q\te1\tx\turl\n", "x").is_err());
        assert!(UrlListProvider::parse("q e1 1 url\n", "x").is_err());
        assert!(UrlListProvider::parse("q\te1\t1\ta\nq\te1\t1\tb\n", "x").is_err());
    }
}
