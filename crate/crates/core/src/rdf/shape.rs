use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{RdfTriple, TripleSet};
use crate::error::{Error, Result};
use crate::eval::tokenize;

/// Token placed between consecutive triples by [`linearize`].
pub const TRIPLE_BOUNDARY: &str = "<TSP>";

/// Positions of `mr`'s triples (indices into `mr.triples()`) in left-to-right
/// depth-first order.
///
/// Roots are nodes that occur as a subject but never as an object, taken in
/// input order; sibling edges follow input order. Without any root the input
/// order is returned unchanged. Triples unreachable from every root (a cycle
/// hanging off the tree) are appended in input order.
pub fn traversal_indices(mr: &TripleSet) -> Vec<usize> {
    let triples = mr.triples();
    let objects: HashSet<&str> = triples.iter().map(|t| t.object.as_str()).collect();
    let mut outgoing: HashMap<&str, Vec<usize>> = HashMap::new();
    let mut roots: Vec<&str> = Vec::new();
    for (i, t) in triples.iter().enumerate() {
        outgoing.entry(&t.subject).or_default().push(i);
        if !objects.contains(t.subject.as_str()) && !roots.contains(&t.subject.as_str()) {
            roots.push(&t.subject);
        }
    }
    if roots.is_empty() {
        log::warn!("no root in {:?}; keeping input order", mr.canonical_key());
        return (0..triples.len()).collect();
    }

    let mut emitted = vec![false; triples.len()];
    let mut visited: HashSet<&str> = HashSet::new();
    let mut order = Vec::with_capacity(triples.len());
    for root in roots {
        if !visited.insert(root) {
            continue;
        }
        // (node, next outgoing edge to look at)
        let mut stack: Vec<(&str, usize)> = vec![(root, 0)];
        while let Some((node, cursor)) = stack.last_mut() {
            let edges = outgoing.get(*node).map(Vec::as_slice).unwrap_or(&[]);
            let Some(&edge) = edges.get(*cursor) else {
                stack.pop();
                continue;
            };
            *cursor += 1;
            if emitted[edge] {
                continue;
            }
            emitted[edge] = true;
            order.push(edge);
            let child = triples[edge].object.as_str();
            if visited.insert(child) {
                stack.push((child, 0));
            }
        }
    }
    if order.len() < triples.len() {
        log::warn!(
            "{} triple(s) unreachable from a root in {:?}; appended in input order",
            triples.len() - order.len(),
            mr.canonical_key()
        );
        order.extend((0..triples.len()).filter(|&i| !emitted[i]));
    }
    order
}

/// The triples of `mr` in left-to-right depth-first order.
pub fn traversal_order(mr: &TripleSet) -> Vec<&RdfTriple> {
    let triples = mr.triples();
    traversal_indices(mr).into_iter().map(|i| &triples[i]).collect()
}

/// Graph shape of a triple set with entity and property names removed.
///
/// Encoded as a sorted `i→j` edge list joined by `;`, where nodes are numbered
/// by depth-first discovery order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TreeSkeleton(String);

impl TreeSkeleton {
    pub fn of(mr: &TripleSet) -> Self {
        let mut labels: HashMap<&str, usize> = HashMap::new();
        let mut edges = Vec::with_capacity(mr.len());
        for t in traversal_order(mr) {
            let next = labels.len();
            let s = *labels.entry(&t.subject).or_insert(next);
            let next = labels.len();
            let o = *labels.entry(&t.object).or_insert(next);
            edges.push((s, o));
        }
        edges.sort_unstable();
        let encoded = edges
            .iter()
            .map(|(s, o)| format!("{s}→{o}"))
            .collect::<Vec<_>>()
            .join(";");
        TreeSkeleton(encoded)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Number of triples the skeleton describes.
    pub fn edge_count(&self) -> usize {
        self.0.split(';').count()
    }
}

impl From<String> for TreeSkeleton {
    fn from(s: String) -> Self {
        TreeSkeleton(s)
    }
}

impl fmt::Display for TreeSkeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn skeleton(mr: &TripleSet) -> TreeSkeleton {
    TreeSkeleton::of(mr)
}

/// Flattens `mr` to a token sequence: triples in traversal order, each as
/// `subject property object`, separated by [`TRIPLE_BOUNDARY`].
pub fn linearize(mr: &TripleSet) -> Vec<String> {
    let mut tokens = Vec::new();
    for (i, t) in traversal_order(mr).into_iter().enumerate() {
        if i > 0 {
            tokens.push(TRIPLE_BOUNDARY.to_string());
        }
        for field in [&t.subject, &t.property, &t.object] {
            tokens.extend(tokenize(&field.replace('_', " ")));
        }
    }
    tokens
}

/// Union of pairwise-disjoint blocks. Fails on the first triple that shows up
/// in two blocks.
pub fn disjoint_union<'a, I>(blocks: I) -> Result<TripleSet>
where
    I: IntoIterator<Item = &'a TripleSet>,
{
    let mut seen: BTreeSet<&RdfTriple> = BTreeSet::new();
    let mut out = Vec::new();
    for block in blocks {
        for t in block {
            if !seen.insert(t) {
                return Err(Error::Overlap(t.clone()));
            }
            out.push(t.clone());
        }
    }
    TripleSet::new(out)
}
