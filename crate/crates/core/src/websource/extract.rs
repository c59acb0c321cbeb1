use ego_tree::NodeRef;
use scraper::{Html, Node};

use super::WebSourceError;

/// Subtrees that never contribute text.
const DROPPED: &[&str] = &[
    "script", "style", "noscript", "template", "form", "nav", "footer", "iframe", "svg", "button",
    "select", "textarea", "head",
];

/// Elements whose text forms one output line.
const BLOCKS: &[&str] = &[
    "p", "h1", "h2", "h3", "h4", "h5", "h6", "li", "tr", "caption", "dt", "dd",
];

/// Containers whose children are blocks; never folded into a parent line.
const CONTAINERS: &[&str] = &["ul", "ol", "dl", "table"];

/// Elements that separate words when their text is concatenated.
const BREAKING: &[&str] = &["td", "th", "br", "div", "section", "article"];

/// Extracts the text of content blocks (paragraphs, headings, list items
/// and table rows) in document order, one block per line. Script, style,
/// form, navigation and footer subtrees are skipped, as are blocks whose
/// only text is link text. Entities are decoded.
pub fn extract_text(raw_html: &[u8]) -> Result<String, WebSourceError> {
    let html = decode(raw_html)?;
    let doc = Html::parse_document(&html);
    let mut lines = Vec::new();
    walk(doc.tree.root(), &mut lines);
    Ok(lines.join("\n"))
}

/// Text of a `text/plain` page: non-empty lines, whitespace collapsed.
pub(crate) fn extract_plain(raw: &[u8]) -> Result<String, WebSourceError> {
    let text = decode(raw)?;
    Ok(text
        .lines()
        .map(clean)
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join("\n"))
}

fn decode(raw: &[u8]) -> Result<String, WebSourceError> {
    let raw = raw.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(raw);
    if raw.contains(&0) {
        return Err(WebSourceError::UndecodableContent);
    }
    match std::str::from_utf8(raw) {
        Ok(s) => Ok(s.to_string()),
        Err(_) => {
            // Tolerate a few stray bytes from mislabelled charsets, not binary payloads.
            let lossy = String::from_utf8_lossy(raw);
            let total = lossy.chars().count().max(1);
            let bad = lossy
                .chars()
                .filter(|&c| c == char::REPLACEMENT_CHARACTER)
                .count();
            if bad * 20 > total {
                Err(WebSourceError::UndecodableContent)
            } else {
                Ok(lossy.into_owned())
            }
        }
    }
}

fn element_name<'a>(node: &NodeRef<'a, Node>) -> Option<&'a str> {
    match node.value() {
        Node::Element(el) => Some(el.name()),
        _ => None,
    }
}

fn walk(node: NodeRef<'_, Node>, lines: &mut Vec<String>) {
    for child in node.children() {
        let Some(name) = element_name(&child) else {
            continue;
        };
        if DROPPED.contains(&name) {
            continue;
        }
        if BLOCKS.contains(&name) {
            let mut text = String::new();
            let mut link_text = String::new();
            collect_inline(child, &mut text, &mut link_text, false);
            let line = clean(&text);
            if !line.is_empty() && !is_link_only(&line, &link_text) {
                lines.push(line);
            }
        }
        walk(child, lines);
    }
}

/// Gathers the text of `node` without descending into nested blocks or
/// dropped subtrees. Text under `<a>` is mirrored into `link_text`.
fn collect_inline(
    node: NodeRef<'_, Node>,
    text: &mut String,
    link_text: &mut String,
    in_link: bool,
) {
    for child in node.children() {
        match child.value() {
            Node::Text(t) => {
                text.push_str(t);
                if in_link {
                    link_text.push_str(t);
                }
            }
            Node::Element(el) => {
                let name = el.name();
                if DROPPED.contains(&name) || BLOCKS.contains(&name) || CONTAINERS.contains(&name) {
                    text.push(' ');
                    continue;
                }
                if BREAKING.contains(&name) {
                    text.push(' ');
                }
                collect_inline(child, text, link_text, in_link || name == "a");
                if BREAKING.contains(&name) {
                    text.push(' ');
                }
            }
            _ => {}
        }
    }
}

fn is_link_only(line: &str, link_text: &str) -> bool {
    let strip = |s: &str| s.chars().filter(|c| !c.is_whitespace()).count();
    strip(link_text) >= strip(line)
}

/// Collapses whitespace and defuses any `<` that could read as markup.
fn clean(text: &str) -> String {
    let collapsed = text.split_whitespace().collect::<Vec<_>>().join(" ");
    let chars: Vec<char> = collapsed.chars().collect();
    let mut out = String::with_capacity(collapsed.len());
    for (i, &c) in chars.iter().enumerate() {
        let next_is_tagish = chars
            .get(i + 1)
            .is_some_and(|n| n.is_ascii_alphabetic() || *n == '/' || *n == '!');
        if c == '<' && next_is_tagish {
            out.push(' ');
        } else {
            out.push(c);
        }
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> String {
        extract_text(s.as_bytes()).unwrap()
    }

    #[test]
    fn script_is_stripped() {
        assert_eq!(ex("<p>hello</p><script>x()</script>"), "hello");
    }

    #[test]
    fn blocks_are_concatenated() {
        assert_eq!(ex("<h1>A</h1><ul><li>b</li><li>c</li></ul>"), "A\nb\nc");
    }

    #[test]
    fn page_with_nav_and_form() {
        let page = r#"<!DOCTYPE html>
<html><head><title>Budget 2019</title><style>p { color: red }</style></head>
<body>
  <nav><ul><li><a href="/">Home</a></li><li><a href="/news">News</a></li></ul></nav>
  <div class="content">
    <p>The finance minister presented the union budget in parliament.</p>
    <p>Fiscal deficit is targeted at 3.3 percent of GDP &amp; revenue is rising.</p>
    <p>Farmers receive a direct <b>income</b> support scheme.</p>
  </div>
  <form action="/search"><p>Search this site</p><input name="q"></form>
</body></html>"#;
        assert_eq!(
            ex(page),
            "The finance minister presented the union budget in parliament.\n\
             Fiscal deficit is targeted at 3.3 percent of GDP & revenue is rising.\n\
             Farmers receive a direct income support scheme."
        );
    }

    #[test]
    fn link_only_blocks_dropped_but_inline_links_kept() {
        let page = "<ul><li><a href='/a'>Sports</a></li></ul><p>Read the <a href='/r'>full report</a> today</p>";
        assert_eq!(ex(page), "Read the full report today");
    }

    #[test]
    fn table_rows_and_nested_lists() {
        let page = "<table><tr><th>Sector</th><th>Crore</th></tr><tr><td>Defence</td><td>3000</td></tr></table>\
                    <ul><li>outer<ul><li>inner</li></ul></li></ul>";
        assert_eq!(ex(page), "Sector Crore\nDefence 3000\nouter\ninner");
    }

    #[test]
    fn malformed_markup_tolerated() {
        assert_eq!(ex("<p>unclosed <b>bold<p>next"), "unclosed bold\nnext");
    }

    #[test]
    fn escaped_markup_is_defused() {
        let out = ex("<p>&lt;script&gt;alert(1)&lt;/script&gt; and a &lt; b</p>");
        assert!(!out.contains("<s") && !out.contains("</"), "{out}");
        assert!(out.contains("a < b"));
    }

    #[test]
    fn binary_payload_rejected() {
        assert!(matches!(
            extract_text(b"%PDF-1.4\x00\x01\x02"),
            Err(WebSourceError::UndecodableContent)
        ));
        let noise: Vec<u8> = (0..200u8).map(|i| 0x80 | (i % 0x40)).collect();
        assert!(extract_text(&noise).is_err());
    }

    #[test]
    fn text_outside_blocks_ignored() {
        assert_eq!(ex("<div>loose text</div><p>kept</p>"), "kept");
    }
}
