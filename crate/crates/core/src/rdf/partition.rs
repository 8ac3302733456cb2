use serde::{Deserialize, Serialize};

use super::shape::{disjoint_union, traversal_indices};
use super::TripleSet;
use crate::error::{Error, Result};

/// Largest triple set [`enumerate_partitions`] accepts; Bell(12) = 4,213,597.
pub const MAX_PARTITION_SIZE: usize = 12;

/// A split of a triple set into non-empty, pairwise-disjoint blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<TripleSet>", into = "Vec<TripleSet>")]
pub struct Partition {
    blocks: Vec<TripleSet>,
}

impl Partition {
    /// Checks disjointness; block order is kept as given.
    pub fn new(blocks: Vec<TripleSet>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidPartition("no blocks".into()));
        }
        disjoint_union(&blocks)?;
        Ok(Partition { blocks })
    }

    /// Builds the partition that puts the triple at traversal position `i`
    /// into block `assignment[i]`. Blocks come out in order of first use, and
    /// each block lists its triples in traversal order.
    pub fn from_assignment(mr: &TripleSet, assignment: &[usize]) -> Result<Self> {
        let order = traversal_indices(mr);
        if assignment.len() != order.len() {
            return Err(Error::InvalidPartition(format!(
                "assignment covers {} positions, triple set has {}",
                assignment.len(),
                order.len()
            )));
        }
        let mut relabel: Vec<Option<usize>> = vec![None; assignment.len()];
        let mut grouped: Vec<Vec<_>> = Vec::new();
        for (&pos, &block) in order.iter().zip(assignment) {
            if block >= relabel.len() {
                return Err(Error::InvalidPartition(format!("block index {block} out of range")));
            }
            let slot = *relabel[block].get_or_insert_with(|| {
                grouped.push(Vec::new());
                grouped.len() - 1
            });
            grouped[slot].push(mr.triples()[pos].clone());
        }
        let blocks = grouped
            .into_iter()
            .map(TripleSet::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(Partition { blocks })
    }

    /// One block per triple, in traversal order.
    pub fn singletons(mr: &TripleSet) -> Self {
        let assignment: Vec<usize> = (0..mr.len()).collect();
        Partition::from_assignment(mr, &assignment).expect("identity assignment is valid")
    }

    pub fn blocks(&self) -> &[TripleSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The triple set this partition decomposes.
    pub fn union(&self) -> TripleSet {
        disjoint_union(&self.blocks).expect("blocks are disjoint by construction")
    }

    /// Whether the blocks cover exactly `mr`.
    pub fn is_partition_of(&self, mr: &TripleSet) -> bool {
        disjoint_union(&self.blocks).is_ok_and(|u| &u == mr)
    }
}

impl TryFrom<Vec<TripleSet>> for Partition {
    type Error = Error;

    fn try_from(blocks: Vec<TripleSet>) -> Result<Self> {
        Partition::new(blocks)
    }
}

impl From<Partition> for Vec<TripleSet> {
    fn from(p: Partition) -> Self {
        p.blocks
    }
}

/// Restricted-growth strings of length `n` in lexicographic order.
///
/// `a[0] = 0` and `a[i] <= 1 + max(a[..i])`; each string names one set
/// partition of `{0..n}`.
#[derive(Debug, Clone)]
pub struct RestrictedGrowth {
    current: Vec<usize>,
    done: bool,
}

impl RestrictedGrowth {
    pub fn new(n: usize) -> Self {
        RestrictedGrowth {
            current: vec![0; n],
            done: n == 0,
        }
    }

    fn advance(&mut self) {
        let a = &mut self.current;
        // prefix_max[i] = max(a[..i])
        let mut prefix_max = vec![0usize; a.len()];
        for i in 1..a.len() {
            prefix_max[i] = prefix_max[i - 1].max(a[i - 1]);
        }
        for i in (1..a.len()).rev() {
            if a[i] <= prefix_max[i] {
                a[i] += 1;
                a[i + 1..].iter_mut().for_each(|x| *x = 0);
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        self.advance();
        Some(out)
    }
}

/// Lazily yields every partition of `mr`, in lexicographic order of the
/// restricted-growth string over traversal positions.
pub fn partitions(mr: &TripleSet) -> Result<impl Iterator<Item = (Vec<usize>, Partition)> + '_> {
    if mr.len() > MAX_PARTITION_SIZE {
        return Err(Error::TooLarge {
            size: mr.len(),
            max: MAX_PARTITION_SIZE,
        });
    }
    Ok(RestrictedGrowth::new(mr.len()).map(move |rgs| {
        let p = Partition::from_assignment(mr, &rgs).expect("restricted-growth string is valid");
        (rgs, p)
    }))
}

/// Every partition of `mr`, exactly once. Blocks are ordered by the smallest
/// traversal position they contain.
pub fn enumerate_partitions(mr: &TripleSet) -> Result<Vec<Partition>> {
    Ok(partitions(mr)?.map(|(_, p)| p).collect())
}
