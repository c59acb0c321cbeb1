use std::io::Write;
use std::path::Path;

use super::{RankedEntry, RankedList, RetrievalError};

/// Writes ranked lists in the six-column run format
/// `query_id Q0 doc_id rank score tag`, scores with 6 decimals.
pub fn write_run<W: Write>(mut out: W, lists: &[RankedList], tag: &str) -> std::io::Result<()> {
    for list in lists {
        for e in &list.entries {
            writeln!(
                out,
                "{} Q0 {} {} {:.6} {}",
                list.query_id, e.doc_id, e.rank, e.score, tag
            )?;
        }
    }
    out.flush()
}

pub fn write_run_file(path: &Path, lists: &[RankedList], tag: &str) -> Result<(), RetrievalError> {
    let file = std::fs::File::create(path).map_err(|e| RetrievalError::io(path, e))?;
    write_run(std::io::BufWriter::new(file), lists, tag).map_err(|e| RetrievalError::io(path, e))
}

/// Parses a run file. Lists come back in order of first appearance, entries
/// in file order.
pub fn parse_run(text: &str, origin: &str) -> Result<Vec<RankedList>, RetrievalError> {
    let mut lists: Vec<RankedList> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| RetrievalError::Parse {
            path: origin.to_string(),
            line: i + 1,
            message,
        };
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 6 {
            return Err(err(format!("expected 6 columns, found {}", cols.len())));
        }
        let rank: u32 = cols[3]
            .parse()
            .map_err(|_| err(format!("bad rank {:?}", cols[3])))?;
        let score: f64 = cols[4]
            .parse()
            .map_err(|_| err(format!("bad score {:?}", cols[4])))?;
        if !score.is_finite() {
            return Err(err(format!("non-finite score {:?}", cols[4])));
        }
        let entry = RankedEntry {
            doc_id: cols[2].to_string(),
            rank,
            score,
        };
        match lists.iter_mut().find(|l| l.query_id == cols[0]) {
            Some(list) => list.entries.push(entry),
            None => lists.push(RankedList {
                query_id: cols[0].to_string(),
                entries: vec![entry],
            }),
        }
    }
    Ok(lists)
}

pub fn read_run(path: &Path) -> Result<Vec<RankedList>, RetrievalError> {
    let text = std::fs::read_to_string(path).map_err(|e| RetrievalError::io(path, e))?;
    parse_run(&text, &path.display().to_string())
}
