//! Triples, triple sets and their shape: traversal order, tree skeletons,
//! linearization and set-partition enumeration.

mod partition;
mod shape;
mod triple;

pub use partition::{enumerate_partitions, partitions, Partition, RestrictedGrowth, MAX_PARTITION_SIZE};
pub use shape::{
    disjoint_union, linearize, skeleton, traversal_indices, traversal_order, TreeSkeleton,
    TRIPLE_BOUNDARY,
};
pub use triple::{RdfTriple, TripleSet};
