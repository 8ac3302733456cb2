use std::collections::HashMap;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use super::tokenize;

pub const MAX_ORDER: usize = 4;

/// Sufficient statistics for BLEU-4. Summing them over segments and scoring
/// the sum gives corpus-level BLEU.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BleuStats {
    /// Clipped n-gram matches for n = 1..=4.
    pub matches: [u64; MAX_ORDER],
    /// Hypothesis n-grams for n = 1..=4.
    pub totals: [u64; MAX_ORDER],
    pub hyp_len: u64,
    /// Length of the reference closest in length to the hypothesis.
    pub ref_len: u64,
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, u64> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for window in tokens.windows(n) {
            let key: Vec<&str> = window.iter().map(AsRef::as_ref).collect();
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    counts
}

impl BleuStats {
    /// Statistics for one tokenized hypothesis against its references.
    /// Each hypothesis n-gram is credited at most as often as it occurs in
    /// the single reference where it occurs most.
    pub fn from_tokens<S: AsRef<str>, R: AsRef<[S]>>(hypothesis: &[S], references: &[R]) -> Self {
        let mut stats = BleuStats {
            hyp_len: hypothesis.len() as u64,
            ..Default::default()
        };
        let hyp_len = hypothesis.len();
        // closest length, ties to the shorter reference
        stats.ref_len = references
            .iter()
            .map(|r| r.as_ref().len())
            .min_by_key(|&len| (len.abs_diff(hyp_len), len))
            .unwrap_or(0) as u64;

        for n in 1..=MAX_ORDER {
            let hyp_counts = ngram_counts(hypothesis, n);
            let mut max_ref: HashMap<&Vec<&str>, u64> = HashMap::new();
            for reference in references {
                for (gram, count) in ngram_counts(reference.as_ref(), n) {
                    if let Some((key, _)) = hyp_counts.get_key_value(&gram) {
                        let slot = max_ref.entry(key).or_insert(0);
                        *slot = (*slot).max(count);
                    }
                }
            }
            stats.totals[n - 1] = hyp_len.saturating_sub(n - 1) as u64;
            stats.matches[n - 1] = hyp_counts
                .iter()
                .map(|(gram, &count)| count.min(max_ref.get(gram).copied().unwrap_or(0)))
                .sum();
        }
        stats
    }

    /// BLEU on the 0-100 scale.
    ///
    /// Orders for which the hypothesis has no n-grams at all are left out of
    /// the geometric mean; any order with n-grams but no match gives 0. An
    /// empty hypothesis scores 0.
    pub fn score(&self) -> f64 {
        if self.hyp_len == 0 {
            return 0.0;
        }
        let mut log_sum = 0.0;
        let mut orders = 0;
        for n in 0..MAX_ORDER {
            if self.totals[n] == 0 {
                continue;
            }
            if self.matches[n] == 0 {
                return 0.0;
            }
            log_sum += (self.matches[n] as f64 / self.totals[n] as f64).ln();
            orders += 1;
        }
        let brevity = if self.hyp_len < self.ref_len {
            (1.0 - self.ref_len as f64 / self.hyp_len as f64).exp()
        } else {
            1.0
        };
        100.0 * brevity * (log_sum / orders as f64).exp()
    }
}

impl AddAssign for BleuStats {
    fn add_assign(&mut self, other: Self) {
        for n in 0..MAX_ORDER {
            self.matches[n] += other.matches[n];
            self.totals[n] += other.totals[n];
        }
        self.hyp_len += other.hyp_len;
        self.ref_len += other.ref_len;
    }
}

impl Add for BleuStats {
    type Output = BleuStats;

    fn add(mut self, other: Self) -> Self {
        self += other;
        self
    }
}

impl Sum for BleuStats {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(BleuStats::default(), Add::add)
    }
}

/// Sentence-level multi-reference BLEU-4 (0-100) with the built-in tokenizer.
pub fn bleu4_multi_ref<S: AsRef<str>>(hypothesis: &str, references: &[S]) -> f64 {
    let hyp = tokenize(hypothesis);
    let refs: Vec<Vec<String>> = references.iter().map(|r| tokenize(r.as_ref())).collect();
    BleuStats::from_tokens(&hyp, &refs).score()
}
