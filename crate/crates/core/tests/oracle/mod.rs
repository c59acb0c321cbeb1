//! Independent dense reference implementations of the expansion scores,
//! shared by the core integration tests and the acceptance suite.

#![allow(dead_code)]

use rand::Rng;

/// Documents as plain token lists; every quantity is recomputed from scratch
/// by counting.
pub struct Dense {
    pub docs: Vec<Vec<String>>,
}

impl Dense {
    pub fn new(docs: Vec<Vec<String>>) -> Self {
        Self {
            docs: docs.into_iter().filter(|d| !d.is_empty()).collect(),
        }
    }

    pub fn total(&self) -> f64 {
        self.docs.iter().map(Vec::len).sum::<usize>() as f64
    }

    pub fn vocabulary(&self) -> Vec<String> {
        let mut v: Vec<String> = self.docs.iter().flatten().cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    fn count(&self, term: &str, doc: usize) -> f64 {
        self.docs[doc].iter().filter(|t| *t == term).count() as f64
    }

    fn distinct(&self, doc: usize) -> f64 {
        let mut d = self.docs[doc].clone();
        d.sort();
        d.dedup();
        d.len() as f64
    }

    pub fn tf_itf(&self, term: &str) -> f64 {
        let f: f64 = (0..self.docs.len()).map(|j| self.count(term, j)).sum();
        f * (self.total() / f).ln()
    }

    pub fn weight(&self, term: &str, doc: usize) -> f64 {
        self.count(term, doc) * (self.total() / self.distinct(doc)).ln()
    }

    pub fn correlation(&self, a: &str, b: &str) -> f64 {
        (0..self.docs.len())
            .map(|j| self.weight(a, j) * self.weight(b, j))
            .sum()
    }

    /// `None` when either weight vector is all zero.
    pub fn cosine(&self, a: &str, b: &str) -> Option<f64> {
        let (aa, bb) = (self.correlation(a, a), self.correlation(b, b));
        if aa == 0.0 || bb == 0.0 {
            None
        } else {
            Some(self.correlation(a, b) / (aa * bb).sqrt())
        }
    }

    pub fn correlation_score(&self, term: &str, query: &[String]) -> f64 {
        query.iter().map(|q| self.correlation(term, q)).sum::<f64>() / query.len() as f64
    }
}

/// The kNN selection pseudocode, one statement per line. `c_exp` holds
/// `(term, tf-itf score)`; `r0` is the iteration count and the final step
/// takes `k - r0` terms so that `k` are returned.
pub fn algorithm1(
    c_exp: &[(String, f64)],
    dense: &Dense,
    k: usize,
    l: usize,
    r0: usize,
) -> Vec<String> {
    // maximum score, ties to the lexically smallest term
    fn select_max(c: &[(String, f64)]) -> String {
        let mut best = &c[0];
        for x in c {
            if x.1 > best.1 || (x.1 == best.1 && x.0 < best.0) {
                best = x;
            }
        }
        best.0.clone()
    }
    // least score, ties to the lexically largest term
    fn select_min(c: &[(String, f64)]) -> String {
        let mut worst = &c[0];
        for x in c {
            if x.1 < worst.1 || (x.1 == worst.1 && x.0 > worst.0) {
                worst = x;
            }
        }
        worst.0.clone()
    }

    let mut c: Vec<(String, f64)> = c_exp.to_vec();
    let mut nn: Vec<String> = Vec::new(); // NN <- {}
    let mut r = r0; // r <- r0
    let mut t = select_max(&c); // select t in C_exp having maximum score
    while r > 0 {
        nn.push(t.clone()); // NN <- NN u {t}
        c.retain(|x| x.0 != t); // C_exp <- C_exp - {t}
        for x in c.iter_mut() {
            x.1 = dense.cosine(&x.0, &t).map_or(0.0, |c| c.min(1.0)); // sort C_exp w.r.t. t by cosine
        }
        if !c.is_empty() {
            let _ = select_max(&c); // select t in C_exp having maximum score
        }
        let mut c_l = Vec::new(); // C_l <- l least scoring terms
        let mut rest = c.clone();
        for _ in 0..l {
            let m = select_min(&rest);
            rest.retain(|x| x.0 != m);
            c_l.push(m);
        }
        c.retain(|x| !c_l.contains(&x.0)); // C_exp <- C_exp - C_l
        if !c.is_empty() {
            t = select_max(&c); // select t in C_exp having maximum score
        }
        r -= 1;
    }
    let mut rest = c.clone(); // C_{k-r} <- k - r0 highest scoring terms
    for _ in 0..k - r0 {
        let m = select_max(&rest);
        rest.retain(|x| x.0 != m);
        nn.push(m); // NN <- NN u C_{k-r}
    }
    nn
}

/// Random corpus of at most `max_docs` documents over at most `max_terms`
/// vocabulary words. Skewed frequencies, occasional duplicated documents.
pub fn random_docs<R: Rng>(rng: &mut R, max_docs: usize, max_terms: usize) -> Vec<Vec<String>> {
    let n_docs = rng.gen_range(1..=max_docs);
    let vocab = rng.gen_range(1..=max_terms);
    let mut docs: Vec<Vec<String>> = Vec::with_capacity(n_docs);
    for _ in 0..n_docs {
        if !docs.is_empty() && rng.gen_bool(0.1) {
            let copy = docs[rng.gen_range(0..docs.len())].clone();
            docs.push(copy);
            continue;
        }
        let len = rng.gen_range(1..=40);
        let doc = (0..len)
            .map(|_| {
                let a = rng.gen_range(0..vocab);
                let b = rng.gen_range(0..vocab);
                format!("w{:02}", a.min(b))
            })
            .collect();
        docs.push(doc);
    }
    docs
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-12
}
