//! Learning to split: relative frequencies of partition patterns per tree
//! skeleton, and argmax prediction for unseen MRs.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::WebSplitItem;
use crate::error::{Error, Result};
use crate::rdf::{skeleton, traversal_indices, Partition, TreeSkeleton, TripleSet};

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Block index per traversal position, as a restricted-growth string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockAssignment(Vec<usize>);

impl BlockAssignment {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        let mut next = 0;
        for &b in &blocks {
            if b > next {
                return Err(Error::InvalidPartition(format!(
                    "{blocks:?} is not a restricted-growth string"
                )));
            }
            if b == next {
                next += 1;
            }
        }
        if blocks.is_empty() {
            return Err(Error::InvalidPartition("empty assignment".into()));
        }
        Ok(BlockAssignment(blocks))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn block_count(&self) -> usize {
        self.0.iter().max().map_or(0, |m| m + 1)
    }
}

impl fmt::Display for BlockAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for BlockAssignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let blocks = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidPartition(format!("bad pattern {s:?}")))?;
        BlockAssignment::new(blocks)
    }
}

/// A partition expressed at skeleton level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplitPattern {
    pub skeleton: TreeSkeleton,
    pub assignment: BlockAssignment,
}

/// The pattern of `partition` over `mr`'s skeleton. Fails unless the blocks
/// disjointly cover `mr`.
pub fn pattern_of(mr: &TripleSet, partition: &Partition) -> Result<SplitPattern> {
    if !partition.is_partition_of(mr) {
        return Err(Error::InvalidPartition(
            "blocks do not reconstruct the triple set".into(),
        ));
    }
    let triples = mr.triples();
    let mut relabel: Vec<Option<usize>> = vec![None; partition.len()];
    let mut next = 0;
    let blocks = traversal_indices(mr)
        .into_iter()
        .map(|pos| {
            let block = partition
                .blocks()
                .iter()
                .position(|b| b.contains(&triples[pos]))
                .expect("checked cover");
            *relabel[block].get_or_insert_with(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    Ok(SplitPattern {
        skeleton: skeleton(mr),
        assignment: BlockAssignment(blocks),
    })
}

/// Anything that can choose a partition for a triple set.
pub trait PartitionPredictor {
    fn predict_partition(&self, mr: &TripleSet) -> Partition;
}

/// Per-skeleton pattern counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SplitModel {
    counts: BTreeMap<TreeSkeleton, BTreeMap<BlockAssignment, u64>>,
    trained_on: usize,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    trained_on: usize,
    skeletons: BTreeMap<String, BTreeMap<String, u64>>,
}

impl SplitModel {
    /// One observation per item.
    pub fn train(items: &[WebSplitItem]) -> Self {
        let mut model = SplitModel::default();
        for item in items {
            let assignment = BlockAssignment(item.block_assignment());
            model.observe(skeleton(&item.complex_mr), assignment);
        }
        model
    }

    pub fn observe(&mut self, skeleton: TreeSkeleton, assignment: BlockAssignment) {
        *self
            .counts
            .entry(skeleton)
            .or_default()
            .entry(assignment)
            .or_insert(0) += 1;
        self.trained_on += 1;
    }

    pub fn trained_on(&self) -> usize {
        self.trained_on
    }

    pub fn count(&self, pattern: &SplitPattern) -> u64 {
        self.counts
            .get(&pattern.skeleton)
            .and_then(|m| m.get(&pattern.assignment))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self, skeleton: &TreeSkeleton) -> u64 {
        self.counts.get(skeleton).map_or(0, |m| m.values().sum())
    }

    /// `P(pattern | skeleton)` as an exact `(count, total)` ratio; `None` for
    /// an unseen skeleton.
    pub fn probability_ratio(&self, pattern: &SplitPattern) -> Option<(u64, u64)> {
        let total = self.total(&pattern.skeleton);
        (total > 0).then(|| (self.count(pattern), total))
    }

    pub fn probability(&self, pattern: &SplitPattern) -> f64 {
        self.probability_ratio(pattern)
            .map_or(0.0, |(c, t)| c as f64 / t as f64)
    }

    /// Patterns seen with `skeleton` and their counts.
    pub fn patterns(&self, skeleton: &TreeSkeleton) -> impl Iterator<Item = (&BlockAssignment, u64)> {
        self.counts
            .get(skeleton)
            .into_iter()
            .flat_map(|m| m.iter().map(|(a, &c)| (a, c)))
    }

    pub fn skeletons(&self) -> impl Iterator<Item = &TreeSkeleton> {
        self.counts.keys()
    }

    pub fn skeleton_count(&self) -> usize {
        self.counts.len()
    }

    /// Distinct (skeleton, pattern) pairs.
    pub fn pattern_count(&self) -> usize {
        self.counts.values().map(BTreeMap::len).sum()
    }

    pub fn mean_candidates(&self) -> f64 {
        if self.counts.is_empty() {
            0.0
        } else {
            self.pattern_count() as f64 / self.skeleton_count() as f64
        }
    }

    /// Most frequent pattern for `skeleton`. Ties go to the pattern with more
    /// blocks, then to the lexicographically smallest string.
    pub fn best_assignment(&self, skeleton: &TreeSkeleton) -> Option<&BlockAssignment> {
        self.counts.get(skeleton).and_then(|m| {
            m.iter()
                .max_by_key(|(a, &c)| (c, a.block_count(), Reverse(*a)))
                .map(|(a, _)| a)
        })
    }

    /// The argmax partition for `mr`; one block per triple when the skeleton
    /// was never seen.
    pub fn predict(&self, mr: &TripleSet) -> Partition {
        match self.best_assignment(&skeleton(mr)) {
            Some(a) if a.0.len() == mr.len() => {
                Partition::from_assignment(mr, &a.0).expect("pattern length matches")
            }
            _ => Partition::singletons(mr),
        }
    }

    pub fn to_json(&self) -> String {
        let file = ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            trained_on: self.trained_on,
            skeletons: self
                .counts
                .iter()
                .map(|(s, m)| {
                    let patterns = m.iter().map(|(a, &c)| (a.to_string(), c)).collect();
                    (s.to_string(), patterns)
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("model serializes") + "\n"
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(json).map_err(|e| Error::json("split model", e))?;
        if file.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::FormatVersion {
                what: "split model",
                found: file.format_version,
                expected: MODEL_FORMAT_VERSION,
            });
        }
        let mut counts = BTreeMap::new();
        for (s, patterns) in file.skeletons {
            let skeleton = TreeSkeleton::from(s);
            let mut m = BTreeMap::new();
            for (p, c) in patterns {
                let a: BlockAssignment = p.parse()?;
                if a.0.len() != skeleton.edge_count() {
                    return Err(Error::InvalidPartition(format!(
                        "pattern {p} does not fit skeleton {skeleton}"
                    )));
                }
                m.insert(a, c);
            }
            counts.insert(skeleton, m);
        }
        Ok(SplitModel {
            counts,
            trained_on: file.trained_on,
        })
    }
}

impl PartitionPredictor for SplitModel {
    fn predict_partition(&self, mr: &TripleSet) -> Partition {
        self.predict(mr)
    }
}

pub fn train_split_model(items: &[WebSplitItem]) -> SplitModel {
    SplitModel::train(items)
}

pub fn predict_partition(model: &SplitModel, mr: &TripleSet) -> Partition {
    model.predict(mr)
}
