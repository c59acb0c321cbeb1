use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use super::EvalError;

/// Judgments for one query.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Judgments {
    grades: HashMap<String, i32>,
    num_rel: usize,
}

impl Judgments {
    pub fn grade(&self, doc_id: &str) -> Option<i32> {
        self.grades.get(doc_id).copied()
    }

    pub fn is_relevant(&self, doc_id: &str) -> bool {
        self.grade(doc_id).is_some_and(|g| g >= 1)
    }

    /// Number of relevant documents (R).
    pub fn num_rel(&self) -> usize {
        self.num_rel
    }

    /// Number of judged nonrelevant documents (N).
    pub fn num_nonrel(&self) -> usize {
        self.grades.len() - self.num_rel
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }
}

/// Relevance judgments: grade 0 is judged nonrelevant, 1 and above relevant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Qrels {
    queries: BTreeMap<String, Judgments>,
}

impl Qrels {
    /// Builds from `(query_id, doc_id, grade)` triples; a second judgment for
    /// the same pair is an error.
    pub fn from_judgments<I, Q, D>(judgments: I) -> Result<Self, EvalError>
    where
        I: IntoIterator<Item = (Q, D, i32)>,
        Q: Into<String>,
        D: Into<String>,
    {
        let mut qrels = Qrels::default();
        for (q, d, g) in judgments {
            let (q, d) = (q.into(), d.into());
            if !qrels.insert(&q, d.clone(), g) {
                return Err(EvalError::DuplicateJudgment {
                    query_id: q,
                    doc_id: d,
                });
            }
        }
        Ok(qrels)
    }

    fn insert(&mut self, q: &str, d: String, grade: i32) -> bool {
        let j = self.queries.entry(q.to_string()).or_default();
        if j.grades.contains_key(&d) {
            return false;
        }
        if grade >= 1 {
            j.num_rel += 1;
        }
        j.grades.insert(d, grade);
        true
    }

    /// Parses the four-column format `query_id iteration doc_id grade`.
    pub fn parse(text: &str, origin: &str) -> Result<Self, EvalError> {
        let mut qrels = Qrels::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: String| EvalError::Parse {
                path: origin.to_string(),
                line: i + 1,
                message,
            };
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 4 {
                return Err(err(format!("expected 4 columns, found {}", cols.len())));
            }
            let grade: i32 = cols[3]
                .parse()
                .map_err(|_| err(format!("bad relevance grade {:?}", cols[3])))?;
            if !qrels.insert(cols[0], cols[2].to_string(), grade) {
                return Err(err(format!("second judgment for {} {}", cols[0], cols[2])));
            }
        }
        Ok(qrels)
    }

    pub fn read(path: &Path) -> Result<Self, EvalError> {
        let text = std::fs::read_to_string(path).map_err(|e| EvalError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn query(&self, query_id: &str) -> Option<&Judgments> {
        self.queries.get(query_id)
    }

    /// Query ids in lexical order.
    pub fn query_ids(&self) -> impl Iterator<Item = &str> {
        self.queries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }
}

/// Topic titles by query id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TopicSet {
    topics: BTreeMap<String, String>,
}

impl TopicSet {
    pub fn from_pairs<I, Q, T>(pairs: I) -> Result<Self, EvalError>
    where
        I: IntoIterator<Item = (Q, T)>,
        Q: Into<String>,
        T: Into<String>,
    {
        let mut topics = BTreeMap::new();
        for (q, t) in pairs {
            let q = q.into();
            if topics.insert(q.clone(), t.into()).is_some() {
                return Err(EvalError::DuplicateTopic(q));
            }
        }
        Ok(Self { topics })
    }

    /// Parses `query_id<TAB>title` lines, or TREC topic SGML when the text
    /// contains a `<top>` element.
    pub fn parse(text: &str, origin: &str) -> Result<Self, EvalError> {
        if text.to_ascii_lowercase().contains("<top>") {
            return parse_sgml_topics(text, origin);
        }
        let mut topics = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| EvalError::Parse {
                path: origin.to_string(),
                line: i + 1,
                message,
            };
            let (q, title) = line
                .split_once('\t')
                .ok_or_else(|| err("expected query_id<TAB>title".into()))?;
            let (q, title) = (q.trim(), title.trim());
            if q.is_empty() || title.is_empty() {
                return Err(err("empty query id or title".into()));
            }
            if topics.insert(q.to_string(), title.to_string()).is_some() {
                return Err(err(format!("duplicate topic {q}")));
            }
        }
        Ok(Self { topics })
    }

    pub fn read(path: &Path) -> Result<Self, EvalError> {
        let text = std::fs::read_to_string(path).map_err(|e| EvalError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn title(&self, query_id: &str) -> Option<&str> {
        self.topics.get(query_id).map(String::as_str)
    }

    /// `(query_id, title)` in lexical id order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.topics.iter().map(|(q, t)| (q.as_str(), t.as_str()))
    }

    pub fn len(&self) -> usize {
        self.topics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }
}

fn parse_sgml_topics(text: &str, origin: &str) -> Result<TopicSet, EvalError> {
    let lower = text.to_ascii_lowercase();
    let line_of = |offset: usize| text[..offset].matches('\n').count() + 1;
    // text after `tag` up to the next '<'
    let field = |from: usize, to: usize, tag: &str| -> Option<String> {
        let at = lower[from..to].find(tag)? + from + tag.len();
        let end = lower[at..to].find('<').map_or(to, |i| i + at);
        Some(
            text[at..end]
                .split_whitespace()
                .collect::<Vec<_>>()
                .join(" "),
        )
    };
    let mut topics = BTreeMap::new();
    let mut pos = 0;
    while let Some(start) = lower[pos..].find("<top>").map(|i| i + pos) {
        let err = |message: &str| EvalError::Parse {
            path: origin.to_string(),
            line: line_of(start),
            message: message.to_string(),
        };
        let end = lower[start..]
            .find("</top>")
            .map(|i| i + start)
            .ok_or_else(|| err("unterminated <top>"))?;
        let num = field(start, end, "<num>").ok_or_else(|| err("missing <num>"))?;
        let num = num.trim_start_matches("Number:").trim().to_string();
        let title = field(start, end, "<title>").ok_or_else(|| err("missing <title>"))?;
        let title = title.trim_start_matches("Topic:").trim().to_string();
        if num.is_empty() || title.is_empty() {
            return Err(err("empty <num> or <title>"));
        }
        if topics.insert(num.clone(), title).is_some() {
            return Err(err(&format!("duplicate topic {num}")));
        }
        pos = end + 6;
    }
    Ok(TopicSet { topics })
}
