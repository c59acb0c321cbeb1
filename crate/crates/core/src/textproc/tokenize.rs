use std::borrow::Borrow;
use std::fmt;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::{porter, StopList, TextError};

/// A normalized lowercase word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Token(String);

impl Token {
    /// Wraps an already-normalized string without validation.
    pub fn new(s: impl Into<String>) -> Self {
        Token(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl Borrow<str> for Token {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Token {
    fn from(s: &str) -> Self {
        Token(s.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzerConfig {
    pub stoplist: StopList,
    pub stemming: bool,
    pub min_len: usize,
    pub max_len: usize,
    pub drop_numeric: bool,
}

impl AnalyzerConfig {
    /// Analyzer for mining expansion terms: SMART stop list, no stemming.
    pub fn expansion() -> Self {
        Self {
            stoplist: StopList::smart(),
            stemming: false,
            min_len: 2,
            max_len: 40,
            drop_numeric: true,
        }
    }

    /// Analyzer for indexing and searching the target collection.
    pub fn indexing() -> Self {
        Self {
            stemming: true,
            ..Self::expansion()
        }
    }

    pub fn validate(&self) -> Result<(), TextError> {
        if self.min_len < 1 || self.min_len > self.max_len {
            return Err(TextError::InvalidConfig(format!(
                "token length bounds [{}, {}] are invalid",
                self.min_len, self.max_len
            )));
        }
        Ok(())
    }
}

impl Default for AnalyzerConfig {
    fn default() -> Self {
        Self::expansion()
    }
}

fn is_joiner(c: char) -> bool {
    c == '-' || c == '\''
}

fn split_words(text: &str) -> Vec<String> {
    let normalized: Vec<char> = text
        .nfkc()
        .flat_map(char::to_lowercase)
        .map(|c| if c == '\u{2019}' { '\'' } else { c })
        .collect();

    let mut words = Vec::new();
    let mut current = String::new();
    for (i, &c) in normalized.iter().enumerate() {
        let joins = is_joiner(c)
            && !current.is_empty()
            && normalized.get(i + 1).is_some_and(|n| n.is_alphanumeric());
        if c.is_alphanumeric() || joins {
            current.push(c);
        } else if !current.is_empty() {
            words.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        words.push(current);
    }
    words
}

/// Lowercases, splits on non-alphanumeric boundaries (keeping internal
/// hyphens and apostrophes) and drops tokens that fail the length bounds,
/// purely numeric tokens (when configured) and stop words. Never stems.
pub fn tokenize(text: &str, config: &AnalyzerConfig) -> Vec<Token> {
    split_words(text)
        .into_iter()
        .filter(|w| {
            let len = w.chars().count();
            len >= config.min_len && len <= config.max_len
        })
        .filter(|w| !(config.drop_numeric && !w.chars().any(char::is_alphabetic)))
        .filter(|w| !config.stoplist.contains(w))
        .map(Token)
        .collect()
}

pub fn stem(token: &Token) -> Token {
    Token(porter::stem(token.as_str()))
}

/// `tokenize` followed by Porter stemming when `config.stemming` is set.
pub fn analyze(text: &str, config: &AnalyzerConfig) -> Vec<Token> {
    let tokens = tokenize(text, config);
    if config.stemming {
        tokens.iter().map(stem).collect()
    } else {
        tokens
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(Token::as_str).collect()
    }

    #[test]
    fn punctuation_and_stopwords() {
        let cfg = AnalyzerConfig {
            stoplist: StopList::from_words(["the", "in"]),
            ..AnalyzerConfig::expansion()
        };
        assert_eq!(
            words(&tokenize("The Taj, in Mumbai!", &cfg)),
            ["taj", "mumbai"]
        );
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("", &AnalyzerConfig::expansion()).is_empty());
        assert!(tokenize("  ,;  ", &AnalyzerConfig::expansion()).is_empty());
    }

    #[test]
    fn internal_joiners_kept() {
        let cfg = AnalyzerConfig {
            stoplist: StopList::empty(),
            ..AnalyzerConfig::expansion()
        };
        assert_eq!(
            words(&tokenize(
                "state-of-the-art -dash- india's rock'n'roll 'quoted'",
                &cfg
            )),
            [
                "state-of-the-art",
                "dash",
                "india's",
                "rock'n'roll",
                "quoted"
            ]
        );
        assert_eq!(words(&tokenize("India\u{2019}s", &cfg)), ["india's"]);
    }

    #[test]
    fn numeric_and_length_filters() {
        let mut cfg = AnalyzerConfig {
            stoplist: StopList::empty(),
            ..AnalyzerConfig::expansion()
        };
        assert_eq!(
            words(&tokenize("2019 budget x g20 2019-20", &cfg)),
            ["budget", "g20"]
        );
        cfg.drop_numeric = false;
        assert_eq!(
            words(&tokenize("2019 budget x g20", &cfg)),
            ["2019", "budget", "g20"]
        );
        let long = "a".repeat(41);
        assert!(tokenize(&long, &cfg).is_empty());
    }

    #[test]
    fn nfkc_and_non_latin() {
        let cfg = AnalyzerConfig {
            stoplist: StopList::empty(),
            ..AnalyzerConfig::expansion()
        };
        // fullwidth letters fold to ASCII; the "ﬁ" ligature expands
        assert_eq!(
            words(&tokenize("ＷＡＴＥＲ ﬁnance", &cfg)),
            ["water", "finance"]
        );
        assert_eq!(words(&tokenize("भारत बजट", &cfg)), ["भारत", "बजट"]);
    }

    #[test]
    fn analyze_stems_only_when_enabled() {
        let text = "Farmers protesting";
        assert_eq!(
            words(&analyze(text, &AnalyzerConfig::expansion())),
            ["farmers", "protesting"]
        );
        assert_eq!(
            words(&analyze(text, &AnalyzerConfig::indexing())),
            ["farmer", "protest"]
        );
    }

    #[test]
    fn invalid_bounds_rejected() {
        let cfg = AnalyzerConfig {
            min_len: 5,
            max_len: 3,
            ..AnalyzerConfig::expansion()
        };
        assert!(cfg.validate().is_err());
        let cfg = AnalyzerConfig {
            min_len: 0,
            ..AnalyzerConfig::expansion()
        };
        assert!(cfg.validate().is_err());
    }
}
