use std::collections::{HashMap, HashSet};

use super::entry::WebNlgEntry;
use super::item::{ItemPart, WebSplitItem};
use super::segment::Text;
use crate::rdf::{partitions, traversal_indices, TripleSet, MAX_PARTITION_SIZE};

/// The constructed benchmark plus how each pairing route contributed.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    /// Deduplicated, in a run-independent order.
    pub items: Vec<WebSplitItem>,
    pub within_entry: usize,
    pub across_entry: usize,
    /// Items produced by both routes (kept once in `items`).
    pub overlap: usize,
}

fn item(mr: &TripleSet, complex: &Text, parts: Vec<ItemPart>) -> WebSplitItem {
    let item = WebSplitItem {
        complex_mr: mr.clone(),
        complex: complex.clone(),
        parts,
    };
    debug_assert!(item.validate().is_ok());
    item
}

/// Pairs each one-sentence verbalisation of an entry with each multi-sentence
/// verbalisation of the same entry.
pub fn build_within_entries(entries: &[WebNlgEntry]) -> Vec<WebSplitItem> {
    let mut out = Vec::new();
    for entry in entries {
        let singles = entry.verbalisations.iter().filter(|t| t.is_single_sentence());
        for complex in singles {
            for text in entry.verbalisations.iter().filter(|t| t.sentence_count() >= 2) {
                let part = ItemPart {
                    mr: entry.mr.clone(),
                    text: text.clone(),
                };
                out.push(item(&entry.mr, complex, vec![part]));
            }
        }
    }
    out
}

/// For every one-sentence verbalisation `C` of an MR, tries every partition
/// of the MR; when every block is itself the MR of some entry, emits one item
/// per choice of verbalisation for the blocks whose texts add up to at least
/// two sentences.
pub fn build_across_entries(entries: &[WebNlgEntry]) -> Vec<WebSplitItem> {
    let index: HashMap<&str, &WebNlgEntry> = entries
        .iter()
        .map(|e| (e.mr.canonical_key(), e))
        .collect();
    let mut out = Vec::new();
    for entry in entries {
        let complexes: Vec<&Text> = entry
            .verbalisations
            .iter()
            .filter(|t| t.is_single_sentence())
            .collect();
        if complexes.is_empty() {
            continue;
        }
        let all = match partitions(&entry.mr) {
            Ok(all) => all,
            Err(e) => {
                log::warn!(
                    "skipping {:?}: {e} (limit {MAX_PARTITION_SIZE})",
                    entry.mr.canonical_key()
                );
                continue;
            }
        };
        for (_, partition) in all {
            let matched: Option<Vec<&WebNlgEntry>> = partition
                .blocks()
                .iter()
                .map(|b| index.get(b.canonical_key()).copied())
                .collect();
            let Some(matched) = matched else {
                continue;
            };
            for complex in &complexes {
                for_each_combination(&matched, |texts| {
                    let sentences: usize = texts.iter().map(|t| t.sentence_count()).sum();
                    if sentences < 2 {
                        return;
                    }
                    let parts = matched
                        .iter()
                        .zip(texts)
                        .map(|(e, t)| ItemPart {
                            mr: e.mr.clone(),
                            text: (*t).clone(),
                        })
                        .collect();
                    out.push(order_texts(item(&entry.mr, complex, parts)));
                });
            }
        }
    }
    out
}

/// Calls `f` with every way of picking one verbalisation per entry, in
/// odometer order (last entry varies fastest).
fn for_each_combination<'a, F>(entries: &[&'a WebNlgEntry], mut f: F)
where
    F: FnMut(&[&'a Text]),
{
    let mut choice = vec![0usize; entries.len()];
    let mut texts: Vec<&Text> = entries.iter().map(|e| &e.verbalisations[0]).collect();
    loop {
        f(&texts);
        let mut i = entries.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < entries[i].verbalisations.len() {
                texts[i] = &entries[i].verbalisations[choice[i]];
                break;
            }
            choice[i] = 0;
            texts[i] = &entries[i].verbalisations[0];
        }
    }
}

/// Sorts parts by the earliest traversal position (within the complex MR)
/// of any of their triples. Stable for ties.
pub fn order_texts(mut item: WebSplitItem) -> WebSplitItem {
    let order = traversal_indices(&item.complex_mr);
    let triples = item.complex_mr.triples();
    let rank: HashMap<_, usize> = order
        .iter()
        .enumerate()
        .map(|(rank, &pos)| (&triples[pos], rank))
        .collect();
    let first = |part: &ItemPart| {
        part.mr
            .iter()
            .filter_map(|t| rank.get(t).copied())
            .min()
            .unwrap_or(usize::MAX)
    };
    let mut keyed: Vec<(usize, ItemPart)> = item.parts.drain(..).map(|p| (first(&p), p)).collect();
    keyed.sort_by_key(|(k, _)| *k);
    item.parts = keyed.into_iter().map(|(_, p)| p).collect();
    item
}

/// Runs both pairing routes, drops items found by both, and sorts the result
/// by complex MR, complex sentence, partition and part texts.
pub fn build_corpus(entries: &[WebNlgEntry]) -> Corpus {
    let within = build_within_entries(entries);
    let across = build_across_entries(entries);
    let within_entry = within.len();
    let across_entry = across.len();

    // Each route is duplicate-free on its own, so only cross-route repeats
    // need filtering.
    let within_set: HashSet<&WebSplitItem> = within.iter().collect();
    let (repeated, fresh): (Vec<_>, Vec<_>) = across
        .into_iter()
        .partition(|item| within_set.contains(item));
    drop(within_set);
    let overlap = repeated.len();
    let mut items = within;
    items.extend(fresh);
    items.sort_by(|a, b| {
        (a.complex_mr.canonical_key(), a.complex.raw())
            .cmp(&(b.complex_mr.canonical_key(), b.complex.raw()))
            .then_with(|| a.sort_key().cmp(&b.sort_key()))
    });
    Corpus {
        items,
        within_entry,
        across_entry,
        overlap,
    }
}
