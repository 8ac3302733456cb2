use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::item::WebSplitItem;
use crate::eval::tokenize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub min: usize,
    pub max: usize,
    pub median: f64,
}

impl Summary {
    fn of(mut values: Vec<usize>) -> Self {
        if values.is_empty() {
            return Summary {
                mean: 0.0,
                min: 0,
                max: 0,
                median: 0.0,
            };
        }
        values.sort_unstable();
        let n = values.len();
        let median = if n % 2 == 1 {
            values[n / 2] as f64
        } else {
            (values[n / 2 - 1] + values[n / 2]) as f64 / 2.0
        };
        Summary {
            mean: values.iter().sum::<usize>() as f64 / n as f64,
            min: values[0],
            max: values[n - 1],
            median,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub total_pairs: usize,
    /// Distinct (complex sentence, ordered rephrasing) string pairs.
    pub distinct_pairs: usize,
    pub distinct_complex_sentences: usize,
    /// Distinct rephrasings per distinct complex sentence.
    pub rephrasings_per_complex: Summary,
    /// Over distinct pairs.
    pub sentences_per_rephrasing: Summary,
    pub vocabulary_size: usize,
    pub within_entry_count: usize,
    pub across_entry_count: usize,
}

pub fn corpus_stats(items: &[WebSplitItem]) -> CorpusStats {
    let mut pairs: BTreeMap<&str, HashSet<String>> = BTreeMap::new();
    let mut sentence_counts = Vec::new();
    let mut vocabulary: HashSet<String> = HashSet::new();
    for item in items {
        if pairs
            .entry(item.complex.raw())
            .or_default()
            .insert(item.rephrasing())
        {
            sentence_counts.push(item.output_sentence_count());
        }
        vocabulary.extend(tokenize(item.complex.raw()));
        for part in &item.parts {
            vocabulary.extend(tokenize(part.text.raw()));
        }
    }
    let within = items.iter().filter(|i| i.is_within_entry()).count();
    CorpusStats {
        total_pairs: items.len(),
        distinct_pairs: sentence_counts.len(),
        distinct_complex_sentences: pairs.len(),
        rephrasings_per_complex: Summary::of(pairs.values().map(HashSet::len).collect()),
        sentences_per_rephrasing: Summary::of(sentence_counts),
        vocabulary_size: vocabulary.len(),
        within_entry_count: within,
        across_entry_count: items.len() - within,
    }
}
