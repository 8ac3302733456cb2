use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SEPARATOR: char = '|';
const ESCAPE: char = '\\';

/// One `subject | property | object` assertion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RdfTriple {
    pub subject: String,
    pub property: String,
    pub object: String,
}

impl RdfTriple {
    /// Builds a triple from already-unescaped fields.
    pub fn new(
        subject: impl Into<String>,
        property: impl Into<String>,
        object: impl Into<String>,
    ) -> Result<Self> {
        let fields = [subject.into(), property.into(), object.into()];
        let display = fields.join(" | ");
        let [subject, property, object] = fields.map(|f| f.trim().to_string());
        for (name, value) in [("subject", &subject), ("property", &property), ("object", &object)] {
            check_field(&display, name, value)?;
        }
        Ok(RdfTriple {
            subject,
            property,
            object,
        })
    }

    /// Parses the serialized form. A backslash escapes the next character, so
    /// `\|` is a literal pipe inside a field.
    pub fn parse(line: &str) -> Result<Self> {
        let malformed = |reason: String| Error::MalformedTriple {
            line: line.to_string(),
            reason,
        };
        let mut fields = vec![String::new()];
        let mut chars = line.chars();
        while let Some(c) = chars.next() {
            match c {
                ESCAPE => match chars.next() {
                    Some(next) => fields.last_mut().unwrap().push(next),
                    None => return Err(malformed("dangling escape at end of line".into())),
                },
                SEPARATOR => fields.push(String::new()),
                _ => fields.last_mut().unwrap().push(c),
            }
        }
        if fields.len() != 3 {
            return Err(malformed(format!(
                "expected 2 '|' separators, found {}",
                fields.len() - 1
            )));
        }
        let object = fields.pop().unwrap();
        let property = fields.pop().unwrap();
        let subject = fields.pop().unwrap();
        let [subject, property, object] = [subject, property, object].map(|f| f.trim().to_string());
        for (name, value) in [("subject", &subject), ("property", &property), ("object", &object)] {
            check_field(line, name, value)?;
        }
        Ok(RdfTriple {
            subject,
            property,
            object,
        })
    }

    fn fields(&self) -> [&str; 3] {
        [&self.subject, &self.property, &self.object]
    }
}

fn check_field(line: &str, name: &str, value: &str) -> Result<()> {
    let reason = if value.is_empty() {
        format!("empty {name}")
    } else if value.contains(['\n', '\r']) {
        format!("line break inside {name}")
    } else {
        return Ok(());
    };
    Err(Error::MalformedTriple {
        line: line.to_string(),
        reason,
    })
}

fn escape_into(out: &mut String, field: &str) {
    for c in field.chars() {
        if c == SEPARATOR || c == ESCAPE {
            out.push(ESCAPE);
        }
        out.push(c);
    }
}

impl fmt::Display for RdfTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, field) in self.fields().iter().enumerate() {
            if i > 0 {
                out.push_str(" | ");
            }
            escape_into(&mut out, field);
        }
        f.write_str(&out)
    }
}

impl FromStr for RdfTriple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RdfTriple::parse(s)
    }
}

impl TryFrom<String> for RdfTriple {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        RdfTriple::parse(&s)
    }
}

impl From<RdfTriple> for String {
    fn from(t: RdfTriple) -> String {
        t.to_string()
    }
}

/// A meaning representation: a duplicate-free, non-empty set of triples.
///
/// Input order is kept because traversal breaks ties with it; equality,
/// ordering and hashing go through the order-independent canonical key.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<RdfTriple>", into = "Vec<RdfTriple>")]
pub struct TripleSet {
    triples: Vec<RdfTriple>,
    key: String,
}

impl TripleSet {
    pub fn new(triples: Vec<RdfTriple>) -> Result<Self> {
        if triples.is_empty() {
            return Err(Error::EmptyTripleSet);
        }
        let mut seen = HashSet::with_capacity(triples.len());
        for t in &triples {
            if !seen.insert(t) {
                return Err(Error::DuplicateTriple(t.clone()));
            }
        }
        let mut sorted: Vec<&RdfTriple> = triples.iter().collect();
        sorted.sort();
        let key = sorted
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join("\n");
        Ok(TripleSet { triples, key })
    }

    /// Parses one serialized triple per element.
    pub fn parse<S: AsRef<str>>(lines: &[S]) -> Result<Self> {
        let triples = lines
            .iter()
            .map(|l| RdfTriple::parse(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        TripleSet::new(triples)
    }

    pub fn triples(&self) -> &[RdfTriple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    /// Always false: construction rejects empty sets.
    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, RdfTriple> {
        self.triples.iter()
    }

    pub fn contains(&self, triple: &RdfTriple) -> bool {
        self.triples.contains(triple)
    }

    /// Triples sorted by (subject, property, object), serialized and joined
    /// by newlines.
    pub fn canonical_key(&self) -> &str {
        &self.key
    }

    /// Serialized triples in input order.
    pub fn to_strings(&self) -> Vec<String> {
        self.triples.iter().map(ToString::to_string).collect()
    }
}

impl PartialEq for TripleSet {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for TripleSet {}

impl Hash for TripleSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl PartialOrd for TripleSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TripleSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl TryFrom<Vec<RdfTriple>> for TripleSet {
    type Error = Error;

    fn try_from(triples: Vec<RdfTriple>) -> Result<Self> {
        TripleSet::new(triples)
    }
}

impl From<TripleSet> for Vec<RdfTriple> {
    fn from(set: TripleSet) -> Self {
        set.triples
    }
}

impl<'a> IntoIterator for &'a TripleSet {
    type Item = &'a RdfTriple;
    type IntoIter = std::slice::Iter<'a, RdfTriple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}
