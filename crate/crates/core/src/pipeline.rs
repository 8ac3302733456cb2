//! Partition-and-generate: split the complex MR with the split model, then
//! generate one text per block and concatenate them in block order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::WebSplitItem;
use crate::generator::GeneratorBackend;
use crate::rdf::{Partition, TripleSet};
use crate::splitter::PartitionPredictor;

#[derive(Clone, Copy)]
pub struct PipelineConfig<'a> {
    pub splitter: &'a dyn PartitionPredictor,
    pub generator: &'a dyn GeneratorBackend,
    /// Pass the complex sentence to the generator.
    pub use_context: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rephrasing {
    pub partition: Partition,
    /// One text per block, in block order.
    pub texts: Vec<String>,
}

impl Rephrasing {
    pub fn output(&self) -> String {
        self.texts.join(" ")
    }
}

pub fn split_and_rephrase(config: &PipelineConfig<'_>, complex: &str, mr: &TripleSet) -> Rephrasing {
    let partition = config.splitter.predict_partition(mr);
    debug_assert!(partition.is_partition_of(mr));
    let context = config.use_context.then_some(complex);
    let texts = partition
        .blocks()
        .iter()
        .map(|block| config.generator.generate(block, context))
        .collect();
    Rephrasing { partition, texts }
}

/// One system output line: `{"id": ..., "complex": ..., "output": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemOutput {
    pub id: usize,
    pub complex: String,
    pub output: String,
}

/// Distinct complex sentences of `items` in sorted order, each with one MR
/// (the smallest canonical key if a sentence carries several).
pub fn complex_inputs(items: &[WebSplitItem]) -> Vec<(&str, &TripleSet)> {
    let mut inputs: BTreeMap<&str, &TripleSet> = BTreeMap::new();
    for item in items {
        inputs
            .entry(item.complex.raw())
            .and_modify(|mr| {
                if item.complex_mr < **mr {
                    *mr = &item.complex_mr;
                }
            })
            .or_insert(&item.complex_mr);
    }
    inputs.into_iter().collect()
}

/// Runs the pipeline once per distinct complex sentence. Ids number the
/// sentences in sorted order.
pub fn run_system(config: &PipelineConfig<'_>, items: &[WebSplitItem]) -> Vec<SystemOutput> {
    complex_inputs(items)
        .into_iter()
        .enumerate()
        .map(|(id, (complex, mr))| SystemOutput {
            id,
            complex: complex.to_string(),
            output: split_and_rephrase(config, complex, mr).output(),
        })
        .collect()
}

/// The SOURCE baseline: every complex sentence copied unchanged.
pub fn source_outputs(items: &[WebSplitItem]) -> Vec<SystemOutput> {
    complex_inputs(items)
        .into_iter()
        .enumerate()
        .map(|(id, (complex, _))| SystemOutput {
            id,
            complex: complex.to_string(),
            output: complex.to_string(),
        })
        .collect()
}
