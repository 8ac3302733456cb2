//! JSON-lines and JSON artifact files, plus the metadata sidecars written
//! next to every artifact.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{ItemRecord, Segmenter, WebSplitItem};
use crate::error::{Error, LineError, Result};
use crate::pipeline::SystemOutput;

pub const TOOL_NAME: &str = "websplit";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let value = serde_json::from_str(&line)
            .map_err(|e| Error::json(format!("{}:{}", path.display(), idx + 1), e))?;
        out.push(value);
    }
    Ok(out)
}

pub fn write_jsonl<T: Serialize>(path: &Path, values: impl IntoIterator<Item = T>) -> Result<()> {
    ensure_parent(path)?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for v in values {
        serde_json::to_writer(&mut w, &v).map_err(|e| Error::json(path.display().to_string(), e))?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, content: &str) -> Result<()> {
    ensure_parent(path)?;
    fs::write(path, content).map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::json(path.display().to_string(), e))?;
    s.push('\n');
    write_text(path, &s)
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
        }
        _ => Ok(()),
    }
}

/// Loads WebSplit items, re-segmenting their texts and checking every item
/// invariant. Bad lines are reported with their line numbers.
pub fn read_items(path: &Path, segmenter: &Segmenter) -> Result<Vec<WebSplitItem>> {
    let records: Vec<ItemRecord> = read_jsonl(path)?;
    let mut items = Vec::with_capacity(records.len());
    let mut errors = Vec::new();
    for (i, r) in records.into_iter().enumerate() {
        match WebSplitItem::from_record(r, segmenter) {
            Ok(item) => items.push(item),
            Err(e) => errors.push(LineError {
                line: i + 1,
                message: e.to_string(),
            }),
        }
    }
    if errors.is_empty() {
        Ok(items)
    } else {
        Err(Error::Ingest(errors))
    }
}

pub fn write_items(path: &Path, items: &[WebSplitItem]) -> Result<()> {
    write_jsonl(path, items.iter().map(WebSplitItem::to_record))
}

pub fn read_outputs(path: &Path) -> Result<Vec<SystemOutput>> {
    read_jsonl(path)
}

pub fn write_outputs(path: &Path, outputs: &[SystemOutput]) -> Result<()> {
    write_jsonl(path, outputs)
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Provenance written beside each artifact. Inputs are recorded by file name
/// and content hash only, so runs in different directories agree byte for
/// byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactMeta {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub inputs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, serde_json::Value>,
}

impl ArtifactMeta {
    pub fn new(command: &str, seed: u64) -> Self {
        ArtifactMeta {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            seed,
            inputs: BTreeMap::new(),
            details: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, path: &Path) -> Result<&mut Self> {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let digest = sha256_file(path)?;
        self.inputs.insert(name, digest);
        Ok(self)
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let value = serde_json::to_value(value).expect("detail serializes");
        self.details.insert(key.to_string(), value);
        self
    }
}

/// `model.json` → `model.json.meta.json`.
pub fn meta_path(artifact: &Path) -> PathBuf {
    let mut name = artifact.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}
