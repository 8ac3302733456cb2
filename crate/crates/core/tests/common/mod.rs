//! Independent oracles shared by the integration and acceptance tests. None
//! of these call into the code under test except to read its types.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use websplit::corpus::WebSplitItem;

pub type Triple = (String, String, String);
pub type Mr = BTreeSet<Triple>;

/// Bell numbers by the Bell triangle.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let v = *next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

/// All set partitions of `items`, built recursively: the first element joins
/// each block of every partition of the rest, or starts its own block.
pub fn set_partitions<T: Clone>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    let Some((first, rest)) = items.split_first() else {
        return vec![vec![]];
    };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first.clone());
            out.push(q);
        }
        let mut q = p;
        q.insert(0, vec![first.clone()]);
        out.push(q);
    }
    out
}

// BLEU oracle: literal n-gram counting by linear scans, no hashing.

fn ngrams(tokens: &[&str], n: usize) -> Vec<Vec<String>> {
    if tokens.len() < n {
        return vec![];
    }
    (0..=tokens.len() - n)
        .map(|i| tokens[i..i + n].iter().map(|s| s.to_string()).collect())
        .collect()
}

fn occurrences(grams: &[Vec<String>], g: &[String]) -> usize {
    grams.iter().filter(|x| x.as_slice() == g).count()
}

/// Clipped matches and hypothesis n-gram totals for n = 1..=4.
pub fn clipped_counts(hyp: &[&str], refs: &[Vec<&str>]) -> [(usize, usize); 4] {
    let mut out = [(0, 0); 4];
    for n in 1..=4 {
        let h = ngrams(hyp, n);
        let rs: Vec<Vec<Vec<String>>> = refs.iter().map(|r| ngrams(r, n)).collect();
        let mut seen: Vec<&Vec<String>> = Vec::new();
        let mut matched = 0;
        for g in &h {
            if seen.contains(&g) {
                continue;
            }
            seen.push(g);
            let in_hyp = occurrences(&h, g);
            let best_ref = rs.iter().map(|r| occurrences(r, g)).max().unwrap_or(0);
            matched += in_hyp.min(best_ref);
        }
        out[n - 1] = (matched, h.len());
    }
    out
}

/// Sentence BLEU-4 on whitespace tokens, scaled 0..100. Brevity uses the
/// reference length closest to the hypothesis (shorter wins ties). Orders
/// with no hypothesis n-grams are left out of the mean; a present order with
/// no matches gives 0.
pub fn bleu_oracle(hyp: &str, refs: &[&str]) -> f64 {
    let h: Vec<&str> = hyp.split_whitespace().collect();
    let rs: Vec<Vec<&str>> = refs.iter().map(|r| r.split_whitespace().collect()).collect();
    if h.is_empty() {
        return 0.0;
    }
    let counts = clipped_counts(&h, &rs);
    let mut product = 1.0f64;
    let mut orders = 0;
    for (m, t) in counts {
        if t == 0 {
            continue;
        }
        if m == 0 {
            return 0.0;
        }
        product *= m as f64 / t as f64;
        orders += 1;
    }
    let c = h.len() as f64;
    let mut best: Option<usize> = None;
    for r in &rs {
        let better = match best {
            None => true,
            Some(b) => {
                let (d, db) = ((r.len() as f64 - c).abs(), (b as f64 - c).abs());
                d < db || (d == db && r.len() < b)
            }
        };
        if better {
            best = Some(r.len());
        }
    }
    let r = best.unwrap_or(0) as f64;
    let bp = if c < r { (1.0 - r / c).exp() } else { 1.0 };
    100.0 * bp * product.powf(1.0 / orders as f64)
}

// Synthetic corpora with known sentence counts.

#[derive(Debug, Clone)]
pub struct SynthEntry {
    pub mr: Vec<Triple>,
    /// (text, number of sentences)
    pub texts: Vec<(String, usize)>,
}

pub fn triple_string(t: &Triple) -> String {
    format!("{} | {} | {}", t.0, t.1, t.2)
}

/// Up to `max_entries` entries over a small shared triple pool, so that
/// many MRs are unions of others. Every text is unique and its sentence
/// count is known by construction.
pub fn random_corpus<R: Rng>(rng: &mut R, max_entries: usize, max_triples: usize) -> Vec<SynthEntry> {
    let entities = ["Ann", "Bob", "Cyd", "Dee", "Eve"];
    let props = ["knows", "likes", "owns"];
    let pool_size = rng.gen_range(3..=6);
    let mut pool: Vec<Triple> = Vec::new();
    while pool.len() < pool_size {
        let s = entities[rng.gen_range(0..entities.len())];
        let o = entities[rng.gen_range(0..entities.len())];
        let p = props[rng.gen_range(0..props.len())];
        let t = (s.to_string(), p.to_string(), o.to_string());
        if s != o && !pool.contains(&t) {
            pool.push(t);
        }
    }
    let n_entries = rng.gen_range(1..=max_entries);
    let mut mrs: Vec<Vec<Triple>> = Vec::new();
    // seed with singletons so that splits have something to match
    for t in pool.iter().take(n_entries.min(pool.len()) / 2 + 1) {
        mrs.push(vec![t.clone()]);
    }
    let mut attempts = 0;
    while mrs.len() < n_entries && attempts < 200 {
        attempts += 1;
        let k = rng.gen_range(1..=max_triples.min(pool.len()));
        let mut idx: Vec<usize> = (0..pool.len()).collect();
        for i in 0..k {
            let j = rng.gen_range(i..idx.len());
            idx.swap(i, j);
        }
        let mut mr: Vec<Triple> = idx[..k].iter().map(|&i| pool[i].clone()).collect();
        mr.sort();
        if !mrs.iter().any(|m| m.iter().collect::<BTreeSet<_>>() == mr.iter().collect()) {
            mrs.push(mr);
        }
    }
    let mut counter = 0usize;
    mrs.into_iter()
        .map(|mr| {
            let n_texts = rng.gen_range(1..=3);
            let texts = (0..n_texts)
                .map(|_| {
                    let sentences = rng.gen_range(1..=3);
                    let text = (0..sentences)
                        .map(|_| {
                            counter += 1;
                            format!("Word{counter} follows here.")
                        })
                        .collect::<Vec<_>>()
                        .join(" ");
                    (text, sentences)
                })
                .collect();
            SynthEntry { mr, texts }
        })
        .collect()
}

pub fn to_jsonl(entries: &[SynthEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        let line = serde_json::json!({
            "mr": e.mr.iter().map(triple_string).collect::<Vec<_>>(),
            "texts": e.texts.iter().map(|t| t.0.clone()).collect::<Vec<_>>(),
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

/// An item up to part order: (complex MR, complex text, {(part MR, text)}).
pub type ItemKey = (Mr, String, BTreeSet<(Mr, String)>);

pub fn item_key(item: &WebSplitItem) -> ItemKey {
    let mr = |m: &websplit::rdf::TripleSet| -> Mr {
        m.iter()
            .map(|t| (t.subject.clone(), t.property.clone(), t.object.clone()))
            .collect()
    };
    (
        mr(&item.complex_mr),
        item.complex.raw().to_string(),
        item.parts.iter().map(|p| (mr(&p.mr), p.text.raw().to_string())).collect(),
    )
}

/// Direct enumeration of every (complex, partition, verbalisation
/// combination) tuple: each one-sentence text of an entry, each partition of
/// that entry's MR whose blocks are all entry MRs, and each choice of one
/// text per block with at least two sentences in total.
pub fn oracle_items(entries: &[SynthEntry]) -> BTreeSet<ItemKey> {
    let by_mr: BTreeMap<Mr, &SynthEntry> = entries
        .iter()
        .map(|e| (e.mr.iter().cloned().collect(), e))
        .collect();
    let mut out = BTreeSet::new();
    for e in entries {
        let complex_mr: Mr = e.mr.iter().cloned().collect();
        let triples: Vec<Triple> = complex_mr.iter().cloned().collect();
        for (complex, sentences) in &e.texts {
            if *sentences != 1 {
                continue;
            }
            for partition in set_partitions(&triples) {
                let blocks: Vec<Mr> = partition.iter().map(|b| b.iter().cloned().collect()).collect();
                let Some(matched) = blocks.iter().map(|b| by_mr.get(b)).collect::<Option<Vec<_>>>() else {
                    continue;
                };
                let mut choice = vec![0usize; blocks.len()];
                'combos: loop {
                    let total: usize = choice.iter().zip(&matched).map(|(&c, m)| m.texts[c].1).sum();
                    if total >= 2 {
                        let parts = choice
                            .iter()
                            .zip(&matched)
                            .zip(&blocks)
                            .map(|((&c, m), b)| (b.clone(), m.texts[c].0.clone()))
                            .collect();
                        out.insert((complex_mr.clone(), complex.clone(), parts));
                    }
                    for i in 0..choice.len() {
                        choice[i] += 1;
                        if choice[i] < matched[i].texts.len() {
                            continue 'combos;
                        }
                        choice[i] = 0;
                    }
                    break;
                }
            }
        }
    }
    out
}
