use serde::{Deserialize, Serialize};

use super::segment::{Segmenter, Text};
use crate::error::{Error, Result};
use crate::rdf::{disjoint_union, traversal_indices, Partition, TripleSet};

/// One `(M_i, T_i)` piece of a rephrasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ItemPart {
    pub mr: TripleSet,
    pub text: Text,
}

/// A complex sentence with its MR, paired with a multi-sentence rephrasing
/// whose parts' MRs partition the complex MR.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WebSplitItem {
    pub complex_mr: TripleSet,
    pub complex: Text,
    pub parts: Vec<ItemPart>,
}

/// On-disk form of a [`WebSplitItem`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ItemRecord {
    pub complex_mr: TripleSet,
    pub complex: String,
    pub parts: Vec<PartRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartRecord {
    pub mr: TripleSet,
    pub text: String,
}

impl WebSplitItem {
    pub fn new(complex_mr: TripleSet, complex: Text, parts: Vec<ItemPart>) -> Result<Self> {
        let item = WebSplitItem {
            complex_mr,
            complex,
            parts,
        };
        item.validate()?;
        Ok(item)
    }

    /// Checks the item invariants: one-sentence complex side, at least two
    /// output sentences, and part MRs that disjointly cover the complex MR.
    pub fn validate(&self) -> Result<()> {
        if !self.complex.is_single_sentence() {
            return Err(Error::InvalidItem(format!(
                "complex side has {} sentences",
                self.complex.sentence_count()
            )));
        }
        if self.parts.is_empty() {
            return Err(Error::InvalidItem("no parts".into()));
        }
        if self.output_sentence_count() < 2 {
            return Err(Error::InvalidItem("rephrasing has fewer than two sentences".into()));
        }
        let union = disjoint_union(self.parts.iter().map(|p| &p.mr))?;
        if union != self.complex_mr {
            return Err(Error::InvalidItem("part MRs do not cover the complex MR".into()));
        }
        Ok(())
    }

    pub fn output_sentence_count(&self) -> usize {
        self.parts.iter().map(|p| p.text.sentence_count()).sum()
    }

    /// Part texts joined by single spaces.
    pub fn rephrasing(&self) -> String {
        self.parts
            .iter()
            .map(|p| p.text.raw())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.parts.iter().map(|p| p.mr.clone()).collect())
            .expect("validated items have disjoint parts")
    }

    /// Block index of each triple of the complex MR, by traversal position,
    /// with blocks numbered in order of first use.
    pub fn block_assignment(&self) -> Vec<usize> {
        let triples = self.complex_mr.triples();
        let mut relabel: Vec<Option<usize>> = vec![None; self.parts.len()];
        let mut next = 0;
        traversal_indices(&self.complex_mr)
            .into_iter()
            .map(|pos| {
                let part = self
                    .parts
                    .iter()
                    .position(|p| p.mr.contains(&triples[pos]))
                    .expect("validated items cover the complex MR");
                *relabel[part].get_or_insert_with(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    }

    /// Within-entry items rephrase the complex MR with a single text.
    pub fn is_within_entry(&self) -> bool {
        self.parts.len() == 1
    }

    /// Total order used to make corpus output independent of build order.
    pub fn sort_key(&self) -> (&str, &str, Vec<usize>, Vec<&str>) {
        (
            self.complex_mr.canonical_key(),
            self.complex.raw(),
            self.block_assignment(),
            self.parts.iter().map(|p| p.text.raw()).collect(),
        )
    }

    pub fn to_record(&self) -> ItemRecord {
        ItemRecord {
            complex_mr: self.complex_mr.clone(),
            complex: self.complex.raw().to_string(),
            parts: self
                .parts
                .iter()
                .map(|p| PartRecord {
                    mr: p.mr.clone(),
                    text: p.text.raw().to_string(),
                })
                .collect(),
        }
    }

    /// Rebuilds an item from its record, re-segmenting every text.
    pub fn from_record(record: ItemRecord, segmenter: &Segmenter) -> Result<Self> {
        let parts = record
            .parts
            .into_iter()
            .map(|p| ItemPart {
                text: segmenter.segment(&p.text),
                mr: p.mr,
            })
            .collect();
        WebSplitItem::new(record.complex_mr, segmenter.segment(&record.complex), parts)
    }
}
