use std::collections::HashSet;
use std::path::Path;

use super::TextError;

const SMART: &str = include_str!("smart_stoplist.txt");

/// A set of normalized words removed during tokenization.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopList {
    words: HashSet<String>,
}

impl StopList {
    /// The SMART English stop list (570 distinct words).
    pub fn smart() -> Self {
        Self::parse(SMART)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Parses one word per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| l.to_lowercase())
            .collect();
        Self { words }
    }

    pub fn from_file(path: &Path) -> Result<Self, TextError> {
        let text = std::fs::read_to_string(path).map_err(|source| TextError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::parse(&text))
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            words: words.into_iter().map(Into::into).collect(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smart_list_size() {
        let s = StopList::smart();
        assert_eq!(s.len(), 570);
        assert!(s.contains("the"));
        assert!(s.contains("ain't"));
        assert!(!s.contains("water"));
    }

    #[test]
    fn parse_skips_comments() {
        let s = StopList::parse("# header\nfoo\n\n bar # trailing\n");
        assert_eq!(s.len(), 2);
        assert!(s.contains("bar"));
    }
}
