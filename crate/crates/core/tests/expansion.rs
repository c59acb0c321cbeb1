mod oracle;

use std::collections::BTreeMap;

use chrono::{TimeZone, Utc};
use oracle::{algorithm1, random_docs, rel_close, Dense};
use proptest::prelude::*;
use qexpand::expansion::{
    correlation_score, cosine_of, cosine_sim, doc_weight, expand_query, knn_select, rank_by_tf_itf,
    rank_by_tf_itf_in_base, sparse_dot, term_correlation, tf_itf, weight_vector, Corpus,
    ExpansionConfig, KnnParams, Query,
};
use qexpand::textproc::{AnalyzerConfig, Token};
use qexpand::websource::{EngineId, SerpEntry, Snapshot, WebDocument};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus_of(docs: &[Vec<String>]) -> Corpus {
    Corpus::from_tokens(docs.iter().enumerate().map(|(i, d)| {
        (
            format!("d{i}"),
            d.iter().map(|t| Token::new(t.as_str())).collect(),
        )
    }))
    .unwrap()
}

#[test]
fn formulas_match_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let docs = random_docs(&mut rng, 10, 50);
        let corpus = corpus_of(&docs);
        let dense = Dense::new(docs);
        let vocab = dense.vocabulary();
        assert_eq!(vocab.len(), corpus.term_count());
        for a in &vocab {
            assert!(rel_close(
                tf_itf(a, &corpus).unwrap(),
                dense.tf_itf(a),
                1e-9
            ));
            for j in 0..dense.docs.len() {
                assert!(rel_close(
                    doc_weight(a, j, &corpus).unwrap(),
                    dense.weight(a, j),
                    1e-9
                ));
            }
        }
        for _ in 0..20 {
            let a = &vocab[rng.gen_range(0..vocab.len())];
            let b = &vocab[rng.gen_range(0..vocab.len())];
            assert!(rel_close(
                term_correlation(a, b, &corpus).unwrap(),
                dense.correlation(a, b),
                1e-9
            ));
            match (cosine_sim(a, b, &corpus), dense.cosine(a, b)) {
                (Ok(got), Some(want)) => assert!(rel_close(got, want.min(1.0), 1e-9)),
                (Err(_), None) => {}
                (got, want) => panic!("{a} {b}: {got:?} vs {want:?}"),
            }
            let q = vec![b.clone(), "absent".to_string()];
            let query =
                Query::new("q", q.iter().map(|s| Token::new(s.as_str())).collect()).unwrap();
            assert!(rel_close(
                correlation_score(a, &query, &corpus).unwrap(),
                dense.correlation_score(a, &q),
                1e-9
            ));
        }
    }
}

#[test]
fn knn_matches_transcription() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 60 {
        let docs = random_docs(&mut rng, 10, 50);
        let corpus = corpus_of(&docs);
        let dense = Dense::new(docs);
        let k = rng.gen_range(1..=20);
        let r0 = rng.gen_range(1..=k.min(5));
        let l = rng.gen_range(0..=3);
        let c_exp = rank_by_tf_itf(&corpus, 50);
        if c_exp.len() < k + l * r0 {
            continue;
        }
        let pairs: Vec<(String, f64)> = c_exp
            .iter()
            .map(|s| (s.term.to_string(), s.score))
            .collect();
        let got = knn_select(&c_exp, &corpus, KnnParams { k, l, r0 }).unwrap();
        let want = algorithm1(&pairs, &dense, k, l, r0);
        assert_eq!(got.iter().map(Token::as_str).collect::<Vec<_>>(), want);
        checked += 1;
    }
}

fn corpus_strategy() -> impl Strategy<Value = Vec<Vec<String>>> {
    any::<u64>().prop_map(|seed| random_docs(&mut ChaCha8Rng::seed_from_u64(seed), 10, 50))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tf_itf_zero_iff_term_is_everything(docs in corpus_strategy()) {
        let corpus = corpus_of(&docs);
        for t in corpus.terms() {
            let s = tf_itf(t.as_str(), &corpus).unwrap();
            prop_assert!(s >= 0.0);
            prop_assert_eq!(s == 0.0, corpus.term_total(t.as_str()) == corpus.total_tokens());
        }
    }

    #[test]
    fn log_base_keeps_ranking(docs in corpus_strategy(), base in 1.5f64..20.0) {
        let corpus = corpus_of(&docs);
        let e: Vec<Token> = rank_by_tf_itf(&corpus, 100).into_iter().map(|s| s.term).collect();
        let b: Vec<Token> = rank_by_tf_itf_in_base(&corpus, 100, base).into_iter().map(|s| s.term).collect();
        // ranks agree except inside groups whose scores are equal up to rounding
        let es: BTreeMap<Token, f64> = rank_by_tf_itf(&corpus, 100).into_iter().map(|s| (s.term, s.score)).collect();
        for (x, y) in e.iter().zip(&b) {
            prop_assert!(x == y || rel_close(es[x], es[y], 1e-12));
        }
    }

    #[test]
    fn cosine_bounds_and_symmetry(docs in corpus_strategy(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let corpus = corpus_of(&docs);
        let terms: Vec<&Token> = corpus.terms().collect();
        let (a, b) = (terms[i.index(terms.len())].as_str(), terms[j.index(terms.len())].as_str());
        match (cosine_sim(a, b, &corpus), cosine_sim(b, a, &corpus)) {
            (Ok(x), Ok(y)) => {
                prop_assert!((0.0..=1.0).contains(&x));
                prop_assert_eq!(x, y);
                prop_assert_eq!(cosine_sim(a, a, &corpus).unwrap(), 1.0);
            }
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "asymmetric failure {:?}", other),
        }
    }

    #[test]
    fn knn_shape(docs in corpus_strategy(), k in 1usize..20, l in 0usize..4) {
        let corpus = corpus_of(&docs);
        let r0 = k.min(5);
        let c_exp = rank_by_tf_itf(&corpus, 100);
        prop_assume!(c_exp.len() >= k + l * r0);
        let nn = knn_select(&c_exp, &corpus, KnnParams { k, l, r0 }).unwrap();
        prop_assert_eq!(nn.len(), k);
        prop_assert_eq!(&nn[0], &c_exp[0].term);
        let mut uniq = nn.clone();
        uniq.sort();
        uniq.dedup();
        prop_assert_eq!(uniq.len(), k);
        prop_assert!(nn.iter().all(|t| c_exp.iter().any(|s| &s.term == t)));
    }

    #[test]
    fn single_term_query_score_is_correlation(docs in corpus_strategy(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let corpus = corpus_of(&docs);
        let terms: Vec<Token> = corpus.terms().cloned().collect();
        let (a, q) = (&terms[i.index(terms.len())], &terms[j.index(terms.len())]);
        let query = Query::new("q", vec![q.clone()]).unwrap();
        prop_assert_eq!(
            correlation_score(a.as_str(), &query, &corpus).unwrap(),
            term_correlation(a.as_str(), q.as_str(), &corpus).unwrap()
        );
    }
}

fn snapshot_from(docs: &[Vec<String>], engines: &[&str]) -> Snapshot {
    let at = Utc.with_ymd_and_hms(2019, 5, 1, 0, 0, 0).unwrap();
    let mut entries = Vec::new();
    for (e, engine) in engines.iter().enumerate() {
        for (i, d) in docs
            .iter()
            .enumerate()
            .filter(|(i, _)| i % engines.len() == e)
        {
            entries.push(WebDocument {
                entry: SerpEntry {
                    query_id: "1".into(),
                    engine: EngineId::new(*engine).unwrap(),
                    rank: i as u32 + 1,
                    url: format!("http://{engine}.test/{i}"),
                },
                raw_html: None,
                extracted_text: d.join(" "),
                fetched_at: at,
            });
        }
    }
    Snapshot::new(None, entries).unwrap()
}

#[test]
fn expansion_is_deterministic_and_excludes_query_terms() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let analyzer = AnalyzerConfig {
        min_len: 1,
        ..AnalyzerConfig::expansion()
    };
    let mut runs = 0;
    while runs < 20 {
        let docs: Vec<Vec<String>> = (0..9)
            .map(|_| {
                (0..60)
                    .map(|_| format!("w{:02}", rng.gen_range(0..40).min(rng.gen_range(0..40))))
                    .collect()
            })
            .collect();
        let snap = snapshot_from(&docs, &["e1", "e2", "e3"]);
        let config = ExpansionConfig {
            n_docs: 3,
            m_intermediate: 30,
            knn: KnnParams { k: 10, l: 2, r0: 5 },
            n_final: 5,
            engines: ["e1", "e2", "e3"]
                .map(|e| EngineId::new(e).unwrap())
                .to_vec(),
            dedup: false,
        };
        let query = Query::new("1", vec![Token::from("w00"), Token::from("w03")]).unwrap();
        let Ok(a) = expand_query(&query, &snap, &config, &analyzer) else {
            continue;
        };
        let b = expand_query(&query, &snap, &config, &analyzer).unwrap();
        assert_eq!(a, b);
        assert!(a.expansion.len() <= 5);
        let mut seen = std::collections::HashSet::new();
        for (t, _) in &a.expansion {
            assert!(!query.terms().contains(t));
            assert!(seen.insert(t.clone()));
        }
        assert!(a.expansion.windows(2).all(|w| w[0].1 >= w[1].1));
        runs += 1;
    }
}

#[test]
fn scaled_weights_scale_correlations_quadratically() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let corpus = corpus_of(&random_docs(&mut rng, 10, 50));
        let alpha = rng.gen_range(0.01..100.0);
        let terms: Vec<&Token> = corpus.terms().collect();
        let vecs: Vec<Vec<(usize, f64)>> = terms
            .iter()
            .map(|t| weight_vector(t.as_str(), &corpus).unwrap())
            .collect();
        let scaled: Vec<Vec<(usize, f64)>> = vecs
            .iter()
            .map(|v| v.iter().map(|&(d, w)| (d, alpha * w)).collect())
            .collect();
        for i in 0..terms.len() {
            for j in 0..terms.len() {
                let (c, cs) = (
                    sparse_dot(&vecs[i], &vecs[j]),
                    sparse_dot(&scaled[i], &scaled[j]),
                );
                assert!(rel_close(cs, alpha * alpha * c, 1e-12));
                match (
                    cosine_of(&vecs[i], &vecs[j]),
                    cosine_of(&scaled[i], &scaled[j]),
                ) {
                    (Some(x), Some(y)) => assert!(rel_close(x, y, 1e-12)),
                    (None, None) => {}
                    other => panic!("{other:?}"),
                }
            }
        }
        // correlation scores against a two-term query keep their order
        let q = [0, terms.len() / 2];
        let rank = |v: &[Vec<(usize, f64)>]| {
            let mut s: Vec<(f64, usize)> = (0..terms.len())
                .map(|i| {
                    (
                        q.iter().map(|&k| sparse_dot(&v[i], &v[k])).sum::<f64>() / 2.0,
                        i,
                    )
                })
                .collect();
            s.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            s
        };
        for (a, b) in rank(&vecs).iter().zip(rank(&scaled)) {
            assert!(a.1 == b.1 || rel_close(a.0 * alpha * alpha, b.0, 1e-12));
        }
    }
}
