//! Multi-reference BLEU-4, sentences per complex input (#S/C) and tokens per
//! output sentence (#Tokens/S).

mod bleu;
mod tokenize;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use bleu::{bleu4_multi_ref, BleuStats, MAX_ORDER};
pub use tokenize::tokenize;

use crate::corpus::{Segmenter, WebSplitItem};
use crate::error::{Error, Result};
use crate::pipeline::SystemOutput;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOptions {
    /// Lowercase hypotheses and references before scoring.
    pub lowercase: bool,
    /// Texts are already tokenized; split on whitespace only.
    pub pretokenized: bool,
}

impl EvalOptions {
    fn tokens(&self, text: &str) -> Vec<String> {
        let text = if self.lowercase {
            text.to_lowercase()
        } else {
            text.to_string()
        };
        if self.pretokenized {
            text.split_whitespace().map(String::from).collect()
        } else {
            tokenize(&text)
        }
    }
}

/// Every rephrasing of each test complex sentence, in first-seen order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReferenceSet {
    by_complex: BTreeMap<String, Vec<String>>,
}

impl ReferenceSet {
    pub fn from_items(items: &[WebSplitItem]) -> Self {
        let mut by_complex: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for item in items {
            let refs = by_complex.entry(item.complex.raw().to_string()).or_default();
            let rephrasing = item.rephrasing();
            if !refs.contains(&rephrasing) {
                refs.push(rephrasing);
            }
        }
        ReferenceSet { by_complex }
    }

    pub fn get(&self, complex: &str) -> Option<&[String]> {
        self.by_complex.get(complex).map(Vec::as_slice)
    }

    /// Complex sentences in sorted order.
    pub fn complexes(&self) -> impl Iterator<Item = &str> {
        self.by_complex.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.by_complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_complex.is_empty()
    }
}

/// One row of the results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemReport {
    pub name: String,
    /// Corpus BLEU-4, rounded to two decimals.
    pub bleu: f64,
    pub sentences_per_complex: f64,
    pub tokens_per_sentence: f64,
    pub n_items: usize,
}

/// Scores one system's outputs against `references`.
///
/// BLEU sums clipped counts over all items before combining. #S/C averages
/// the segmented sentence count of each output; #Tokens/S divides all output
/// tokens by all output sentences.
pub fn evaluate_system(
    name: &str,
    outputs: &[SystemOutput],
    references: &ReferenceSet,
    segmenter: &Segmenter,
    options: EvalOptions,
) -> Result<SystemReport> {
    let mut by_complex: HashMap<&str, &str> = HashMap::with_capacity(outputs.len());
    for out in outputs {
        if references.get(&out.complex).is_none() {
            return Err(Error::UnknownComplex(out.complex.clone()));
        }
        by_complex.insert(&out.complex, &out.output);
    }

    let mut stats = BleuStats::default();
    let mut sentences = 0usize;
    let mut tokens = 0usize;
    for complex in references.complexes() {
        let output = *by_complex
            .get(complex)
            .ok_or_else(|| Error::MissingOutput(complex.to_string()))?;
        let refs: Vec<Vec<String>> = references
            .get(complex)
            .unwrap_or_default()
            .iter()
            .map(|r| options.tokens(r))
            .collect();
        let hyp = options.tokens(output);
        stats += BleuStats::from_tokens(&hyp, &refs);
        if !output.trim().is_empty() {
            sentences += segmenter.split(output).len();
        }
        tokens += hyp.len();
    }

    let n = references.len();
    Ok(SystemReport {
        name: name.to_string(),
        bleu: (stats.score() * 100.0).round() / 100.0,
        sentences_per_complex: if n == 0 { 0.0 } else { sentences as f64 / n as f64 },
        tokens_per_sentence: if sentences == 0 {
            0.0
        } else {
            tokens as f64 / sentences as f64
        },
        n_items: n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub options: EvalOptions,
    pub systems: Vec<SystemReport>,
}

impl EvalReport {
    /// Aligned plain-text table with Model, BLEU, #S/C and #Tokens/S columns.
    pub fn table(&self) -> String {
        let width = self
            .systems
            .iter()
            .map(|s| s.name.chars().count())
            .chain(["Model".len()])
            .max()
            .unwrap_or(5);
        let mut out = String::new();
        let _ = writeln!(out, "{:<width$}  {:>6}  {:>5}  {:>9}", "Model", "BLEU", "#S/C", "#Tokens/S");
        for s in &self.systems {
            let _ = writeln!(
                out,
                "{:<width$}  {:>6.2}  {:>5.2}  {:>9.2}",
                s.name, s.bleu, s.sentences_per_complex, s.tokens_per_sentence
            );
        }
        out
    }
}
