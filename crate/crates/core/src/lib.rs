//! Split-and-rephrase benchmark construction and a partition-and-generate
//! baseline.
//!
//! [`corpus`] builds `(complex MR, complex text, [(MR, text)])` items from
//! RDF/text entries, [`splitter`] learns how tree skeletons are split,
//! [`generator`] realizes each block, [`pipeline`] chains the two and
//! [`eval`] scores system outputs with multi-reference BLEU-4.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod generator;
pub mod io;
pub mod pipeline;
pub mod rdf;
pub mod splitter;

pub use error::{Error, Result};
