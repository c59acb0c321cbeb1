use proptest::prelude::*;
use qexpand::textproc::{porter_stem, tokenize, AnalyzerConfig, StopList};

const VOCABULARY: &str = include_str!("fixtures/porter_vocabulary.tsv");

/// Columns: word, reference stem, reference stem of the stem.
fn vocabulary() -> impl Iterator<Item = (&'static str, &'static str, &'static str)> {
    VOCABULARY.lines().map(|l| {
        let mut cols = l.split('\t');
        (
            cols.next().unwrap(),
            cols.next().unwrap(),
            cols.next().unwrap(),
        )
    })
}

#[test]
fn porter_matches_reference_vocabulary() {
    let mut mismatches = Vec::new();
    let mut n = 0;
    for (word, expected, _) in vocabulary() {
        n += 1;
        let got = porter_stem(word);
        if got != expected {
            mismatches.push(format!("{word}: got {got}, want {expected}"));
        }
    }
    assert!(n > 6000);
    assert!(
        mismatches.is_empty(),
        "{} mismatches:\n{}",
        mismatches.len(),
        mismatches.join("\n")
    );
}

#[test]
fn restemming_matches_reference() {
    // Porter is not idempotent in general ("agreed" -> "agre" -> "agr");
    // re-stemming must still agree with the reference implementation.
    for (word, stem, restem) in vocabulary() {
        assert_eq!(porter_stem(stem), restem, "restem of {word}");
    }
    assert_eq!(porter_stem(&porter_stem("agreed")), "agr");
}

#[test]
fn paragraph_hand_tokenized() {
    let paragraph = "In 2019, the Union Budget of India was presented by the finance minister in \
        Parliament. It allocated funds for farmers, other infrastructure and defence, while the \
        fiscal deficit target was set at 3.3 percent. Critics said the budget's tax changes would \
        hurt middle-class families, but supporters argued that spending on roads, water and \
        health would boost growth.";
    assert_eq!(paragraph.split_whitespace().count(), 57);
    let expected = [
        "union",
        "budget",
        "india",
        "presented",
        "finance",
        "minister",
        "parliament",
        "allocated",
        "funds",
        "farmers",
        "infrastructure",
        "defence",
        "fiscal",
        "deficit",
        "target",
        "set",
        "percent",
        "critics",
        "budget's",
        "tax",
        "hurt",
        "middle-class",
        "families",
        "supporters",
        "argued",
        "spending",
        "roads",
        "water",
        "health",
        "boost",
        "growth",
    ];
    let got: Vec<String> = tokenize(paragraph, &AnalyzerConfig::expansion())
        .into_iter()
        .map(|t| t.into_string())
        .collect();
    assert_eq!(got, expected);
}

fn token_is_valid(t: &str, cfg: &AnalyzerConfig) -> bool {
    let chars: Vec<char> = t.chars().collect();
    let joiner = |c: char| c == '-' || c == '\'';
    chars.len() >= cfg.min_len
        && chars.len() <= cfg.max_len
        && chars.iter().all(|c| c.is_alphanumeric() || joiner(*c))
        && !joiner(chars[0])
        && !joiner(chars[chars.len() - 1])
        && t.to_lowercase() == t
}

proptest! {
    #[test]
    fn tokens_satisfy_invariants(text in "[A-Za-z0-9 ,.'\\-!?éü]{0,200}") {
        let cfg = AnalyzerConfig::expansion();
        let tokens = tokenize(&text, &cfg);
        for t in &tokens {
            prop_assert!(token_is_valid(t.as_str(), &cfg), "bad token {:?}", t);
            prop_assert!(!cfg.stoplist.contains(t.as_str()));
        }
        prop_assert_eq!(tokenize(&text, &cfg), tokens);
    }

    #[test]
    fn tokenize_preserves_order(words in proptest::collection::vec("[a-z]{3,8}", 1..20)) {
        let cfg = AnalyzerConfig { stoplist: StopList::empty(), ..AnalyzerConfig::expansion() };
        let text = words.join(" ; ");
        let got: Vec<String> = tokenize(&text, &cfg).into_iter().map(|t| t.into_string()).collect();
        prop_assert_eq!(got, words);
    }
}
