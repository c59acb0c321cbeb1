use std::path::Path;

use serde::Deserialize;

use super::RetrievalError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectionDoc {
    pub doc_id: String,
    pub text: String,
}

#[derive(Deserialize)]
struct JsonDoc {
    doc_id: String,
    text: String,
}

/// Loads a target collection.
///
/// * a directory: every regular file is one document, id = file name without
///   its extension, in lexical file-name order
/// * `*.jsonl`: one `{"doc_id": .., "text": ..}` object per line
/// * anything else: TREC SGML (`<DOC><DOCNO>id</DOCNO> .. </DOC>`)
pub fn load_collection(path: &Path) -> Result<Vec<CollectionDoc>, RetrievalError> {
    if path.is_dir() {
        return load_directory(path);
    }
    let text = std::fs::read_to_string(path).map_err(|e| RetrievalError::io(path, e))?;
    let origin = path.display().to_string();
    if path.extension().is_some_and(|e| e == "jsonl") {
        parse_jsonl(&text, &origin)
    } else {
        parse_trec(&text, &origin)
    }
}

fn load_directory(dir: &Path) -> Result<Vec<CollectionDoc>, RetrievalError> {
    let mut paths = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| RetrievalError::io(dir, e))? {
        let entry = entry.map_err(|e| RetrievalError::io(dir, e))?;
        let p = entry.path();
        if p.is_file() {
            paths.push(p);
        }
    }
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).map_err(|e| RetrievalError::io(&p, e))?;
            let doc_id = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(CollectionDoc { doc_id, text })
        })
        .collect()
}

pub fn parse_jsonl(text: &str, origin: &str) -> Result<Vec<CollectionDoc>, RetrievalError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let d: JsonDoc = serde_json::from_str(l).map_err(|e| RetrievalError::Parse {
                path: origin.to_string(),
                line: i + 1,
                message: e.to_string(),
            })?;
            Ok(CollectionDoc {
                doc_id: d.doc_id,
                text: d.text,
            })
        })
        .collect()
}

pub fn parse_trec(text: &str, origin: &str) -> Result<Vec<CollectionDoc>, RetrievalError> {
    let line_of = |offset: usize| text[..offset].matches('\n').count() + 1;
    let mut docs = Vec::new();
    let mut rest = 0;
    while let Some(start) = text[rest..].find("<DOC>").map(|i| i + rest) {
        let err = |message: &str| RetrievalError::Parse {
            path: origin.to_string(),
            line: line_of(start),
            message: message.to_string(),
        };
        let end = text[start..]
            .find("</DOC>")
            .map(|i| i + start)
            .ok_or_else(|| err("unterminated <DOC>"))?;
        let body = &text[start + 5..end];
        let (a, b) = match (body.find("<DOCNO>"), body.find("</DOCNO>")) {
            (Some(a), Some(b)) if a < b => (a, b),
            _ => return Err(err("missing <DOCNO>")),
        };
        let doc_id = body[a + 7..b].trim().to_string();
        if doc_id.is_empty() {
            return Err(err("empty <DOCNO>"));
        }
        let content = format!("{} {}", &body[..a], &body[b + 8..]);
        docs.push(CollectionDoc {
            doc_id,
            text: strip_tags(&content),
        });
        rest = end + 6;
    }
    Ok(docs)
}

fn strip_tags(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut in_tag = false;
    for c in s.chars() {
        match c {
            '<' => {
                in_tag = true;
                out.push(' ');
            }
            '>' if in_tag => in_tag = false,
            _ if !in_tag => out.push(c),
            _ => {}
        }
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trec_sgml() {
        let text = "<DOC>\n<DOCNO> FT-1 </DOCNO>\n<TEXT>Water on <b>Mars</b></TEXT>\n</DOC>\n<DOC><DOCNO>FT-2</DOCNO>budget</DOC>";
        let docs = parse_trec(text, "t").unwrap();
        assert_eq!(docs.len(), 2);
        assert_eq!(
            docs[0],
            CollectionDoc {
                doc_id: "FT-1".into(),
                text: "Water on Mars".into()
            }
        );
        assert_eq!(docs[1].text, "budget");
        let err = parse_trec("x\n<DOC><TEXT>a</TEXT></DOC>", "t").unwrap_err();
        assert!(matches!(err, RetrievalError::Parse { line: 2, .. }));
    }

    #[test]
    fn jsonl_and_directory() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("b.txt"), "second").unwrap();
        std::fs::write(dir.path().join("a.txt"), "first").unwrap();
        let docs = load_collection(dir.path()).unwrap();
        assert_eq!(
            docs.iter().map(|d| d.doc_id.as_str()).collect::<Vec<_>>(),
            ["a", "b"]
        );

        let p = dir.path().join("c.jsonl");
        std::fs::write(&p, "{\"doc_id\":\"x\",\"text\":\"t\"}\n\n{\"doc_id\":1}\n").unwrap();
        let err = load_collection(&p).unwrap_err();
        assert!(matches!(err, RetrievalError::Parse { line: 3, .. }));
    }
}
