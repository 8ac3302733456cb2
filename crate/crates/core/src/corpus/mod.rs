//! Benchmark construction: ingestion, sentence segmentation, within- and
//! across-entry pairing, ordering, statistics and the train/val/test split.

mod build;
mod entry;
mod item;
mod segment;
mod split;
mod stats;

pub use build::{build_across_entries, build_corpus, build_within_entries, order_texts, Corpus};
pub use entry::{
    ingest, ingest_reader, segment_entries, EntryRecord, IngestOptions, WebNlgEntry, MAX_MR_TRIPLES,
};
pub use item::{ItemPart, ItemRecord, PartRecord, WebSplitItem};
pub use segment::{segment_sentences, Segmenter, Text, DEFAULT_ABBREVIATIONS};
pub use split::{split_train_val_test, DataSplit, SplitRatios};
pub use stats::{corpus_stats, CorpusStats, Summary};
