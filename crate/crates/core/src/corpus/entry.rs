use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;

use super::segment::{Segmenter, Text};
use crate::error::{Error, LineError, Result};
use crate::rdf::TripleSet;

/// Corpus MRs carry between 1 and this many triples.
pub const MAX_MR_TRIPLES: usize = 7;

#[derive(Debug, Clone, Copy, Default)]
pub struct IngestOptions {
    /// Skip malformed lines (with a warning) instead of failing.
    pub lenient: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryLine {
    mr: Vec<String>,
    texts: Vec<String>,
    #[serde(default)]
    category: Option<String>,
}

/// An ingested entry before sentence segmentation.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryRecord {
    pub mr: TripleSet,
    pub texts: Vec<String>,
    pub category: Option<String>,
}

/// An MR with all of its segmented verbalisations.
#[derive(Debug, Clone, PartialEq)]
pub struct WebNlgEntry {
    pub mr: TripleSet,
    pub verbalisations: Vec<Text>,
    pub category: Option<String>,
}

fn parse_line(line: &str) -> std::result::Result<EntryRecord, String> {
    let parsed: EntryLine = serde_json::from_str(line).map_err(|e| format!("invalid JSON: {e}"))?;
    let mr = TripleSet::parse(&parsed.mr).map_err(|e| e.to_string())?;
    if mr.len() > MAX_MR_TRIPLES {
        return Err(format!(
            "MR has {} triples; at most {MAX_MR_TRIPLES} are supported",
            mr.len()
        ));
    }
    if parsed.texts.is_empty() {
        return Err("no texts".into());
    }
    let mut texts = Vec::with_capacity(parsed.texts.len());
    for t in parsed.texts {
        let t = t.trim();
        if t.is_empty() {
            return Err("empty text".into());
        }
        texts.push(t.to_string());
    }
    Ok(EntryRecord {
        mr,
        texts,
        category: parsed.category,
    })
}

/// Reads JSON-lines entries (`{"mr": [...], "texts": [...], "category": ...}`).
///
/// Entries with the same MR are merged and their texts deduplicated, keeping
/// first-seen order. Malformed lines are collected; unless `lenient` is set
/// any of them fails the whole read.
pub fn ingest_reader<R: BufRead>(reader: R, options: IngestOptions) -> Result<Vec<EntryRecord>> {
    let mut entries: Vec<EntryRecord> = Vec::new();
    let mut by_key: HashMap<String, usize> = HashMap::new();
    let mut errors = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let number = idx + 1;
        let line = line.map_err(|e| Error::io("<entries>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = match parse_line(&line) {
            Ok(r) => r,
            Err(message) => {
                errors.push(LineError {
                    line: number,
                    message,
                });
                continue;
            }
        };
        match by_key.get(record.mr.canonical_key()) {
            Some(&i) => {
                let existing = &mut entries[i];
                for t in record.texts {
                    if !existing.texts.contains(&t) {
                        existing.texts.push(t);
                    }
                }
                match (&existing.category, record.category) {
                    (None, c) => existing.category = c,
                    (Some(a), Some(b)) if *a != b => {
                        log::warn!("line {number}: category {b:?} conflicts with {a:?}; keeping {a:?}")
                    }
                    _ => {}
                }
            }
            None => {
                let mut record = record;
                let mut unique: Vec<String> = Vec::with_capacity(record.texts.len());
                for t in record.texts.drain(..) {
                    if !unique.contains(&t) {
                        unique.push(t);
                    }
                }
                record.texts = unique;
                by_key.insert(record.mr.canonical_key().to_string(), entries.len());
                entries.push(record);
            }
        }
    }
    if !errors.is_empty() {
        if options.lenient {
            for e in &errors {
                log::warn!("skipping {e}");
            }
        } else {
            return Err(Error::Ingest(errors));
        }
    }
    if entries.is_empty() {
        return Err(Error::NoEntries);
    }
    Ok(entries)
}

pub fn ingest(path: &Path, options: IngestOptions) -> Result<Vec<EntryRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    ingest_reader(BufReader::new(file), options).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn segment_entries(records: Vec<EntryRecord>, segmenter: &Segmenter) -> Vec<WebNlgEntry> {
    records
        .into_iter()
        .map(|r| WebNlgEntry {
            verbalisations: r.texts.iter().map(|t| segmenter.segment(t)).collect(),
            mr: r.mr,
            category: r.category,
        })
        .collect()
}
