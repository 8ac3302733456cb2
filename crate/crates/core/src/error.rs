use std::io;
use std::path::PathBuf;

use crate::rdf::RdfTriple;

/// A problem found on one line of a JSON-lines input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for LineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed triple {line:?}: {reason}")]
    MalformedTriple { line: String, reason: String },

    #[error("duplicate triple {0}")]
    DuplicateTriple(RdfTriple),

    #[error("a triple set needs at least one triple")]
    EmptyTripleSet,

    #[error("{size} triples is more than the {max} supported here")]
    TooLarge { size: usize, max: usize },

    #[error("triple {0} appears in more than one block")]
    Overlap(RdfTriple),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("no entries")]
    NoEntries,

    #[error("{} malformed input line(s); first: {}", .0.len(), .0[0])]
    Ingest(Vec<LineError>),

    #[error("invalid item: {0}")]
    InvalidItem(String),

    #[error("bad split ratios {0:?}: need three non-negative values summing to 1")]
    BadRatios(Vec<f64>),

    #[error("no output for complex sentence {0:?}")]
    MissingOutput(String),

    #[error("output for {0:?} does not match any test sentence")]
    UnknownComplex(String),

    #[error("invalid override for {raw:?}: {reason}")]
    BadOverride { raw: String, reason: String },

    #[error("unsupported {what} format version {found} (expected {expected})")]
    FormatVersion {
        what: &'static str,
        found: u32,
        expected: u32,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            source,
        }
    }

    /// Whether the error comes from the filesystem rather than from the data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
