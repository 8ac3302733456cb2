//! Learning to rephrase: text generation for a block of triples.
//!
//! [`RetrievalIndex`] answers in three tiers: the modal training text of an
//! identical MR, a training text for an MR of the same skeleton with its
//! entity mentions swapped for the query's, and finally a per-triple
//! template.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::WebSplitItem;
use crate::error::{Error, Result};
use crate::rdf::{skeleton, traversal_order, TreeSkeleton, TripleSet};

pub const INDEX_FORMAT_VERSION: u32 = 1;

/// Produces a text for a block of triples, optionally seeing the complex
/// sentence it came from.
pub trait GeneratorBackend {
    fn generate(&self, mr: &TripleSet, context: Option<&str>) -> String;
}

/// Surface form of an entity identifier: underscores become spaces, a
/// trailing parenthetical disambiguator and surrounding double quotes are
/// dropped, and whitespace is collapsed.
pub fn realize_entity(identifier: &str) -> String {
    let spaced = identifier.replace('_', " ");
    let mut s = spaced.trim();
    if s.len() >= 2 && s.starts_with('"') && s.ends_with('"') {
        s = s[1..s.len() - 1].trim();
    }
    if s.ends_with(')') {
        if let Some(open) = trailing_group_start(s) {
            let head = s[..open].trim_end();
            if !head.is_empty() {
                s = head;
            }
        }
    }
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Byte offset of the `(` matching the final `)`.
fn trailing_group_start(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices().rev() {
        match c {
            ')' => depth += 1,
            '(' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// `leaderName` → `leader name`; also splits on underscores and acronym
/// boundaries (`ISBNNumber` → `isbn number`).
pub fn decamelize(property: &str) -> String {
    let chars: Vec<char> = property.chars().collect();
    let mut out = String::with_capacity(property.len() + 4);
    for (i, &c) in chars.iter().enumerate() {
        if c == '_' || c.is_whitespace() {
            out.push(' ');
            continue;
        }
        if i > 0 && c.is_uppercase() {
            let prev = chars[i - 1];
            let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            if prev.is_lowercase() || prev.is_ascii_digit() || (prev.is_uppercase() && next_lower) {
                out.push(' ');
            }
        }
        out.extend(c.to_lowercase());
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// One `Subject property object .` sentence per triple, in traversal order.
pub fn template_text(mr: &TripleSet) -> String {
    traversal_order(mr)
        .into_iter()
        .map(|t| {
            format!(
                "{} {} {} .",
                capitalize(&realize_entity(&t.subject)),
                decamelize(&t.property),
                realize_entity(&t.object)
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Tier-3-only backend.
#[derive(Debug, Clone, Copy, Default)]
pub struct TemplateGenerator;

impl GeneratorBackend for TemplateGenerator {
    fn generate(&self, mr: &TripleSet, _context: Option<&str>) -> String {
        template_text(mr)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Exemplar {
    pub mr: TripleSet,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Exact,
    Skeleton,
    Template,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generation {
    pub text: String,
    pub tier: Tier,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RetrievalIndex {
    exact: BTreeMap<String, String>,
    by_skeleton: BTreeMap<TreeSkeleton, Vec<Exemplar>>,
}

#[derive(Serialize, Deserialize)]
struct IndexFile {
    format_version: u32,
    exact: BTreeMap<String, String>,
    by_skeleton: BTreeMap<String, Vec<Exemplar>>,
}

impl RetrievalIndex {
    /// Indexes `(MR, text)` pairs. The exact map keeps the most frequent text
    /// per MR (ties to the lexicographically smallest); skeleton buckets keep
    /// every distinct pair, sorted.
    pub fn train<'a, I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a TripleSet, &'a str)>,
    {
        let mut freq: HashMap<&str, HashMap<&str, usize>> = HashMap::new();
        let mut mrs: HashMap<&str, &TripleSet> = HashMap::new();
        for (mr, text) in pairs {
            *freq
                .entry(mr.canonical_key())
                .or_default()
                .entry(text)
                .or_insert(0) += 1;
            mrs.entry(mr.canonical_key()).or_insert(mr);
        }
        let mut index = RetrievalIndex::default();
        for (key, texts) in &freq {
            let (modal, _) = texts
                .iter()
                .max_by(|(ta, ca), (tb, cb)| ca.cmp(cb).then_with(|| tb.cmp(ta)))
                .expect("at least one text per MR");
            index.exact.insert(key.to_string(), modal.to_string());
            let mr = mrs[key];
            let bucket = index.by_skeleton.entry(skeleton(mr)).or_default();
            bucket.extend(texts.keys().map(|t| Exemplar {
                mr: mr.clone(),
                text: t.to_string(),
            }));
        }
        for bucket in index.by_skeleton.values_mut() {
            bucket.sort();
        }
        index
    }

    /// Indexes the `(M_i, T_i)` parts of `items`.
    pub fn from_items(items: &[WebSplitItem]) -> Self {
        RetrievalIndex::train(
            items
                .iter()
                .flat_map(|i| i.parts.iter().map(|p| (&p.mr, p.text.raw()))),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty()
    }

    pub fn exact_len(&self) -> usize {
        self.exact.len()
    }

    pub fn exact(&self, mr: &TripleSet) -> Option<&str> {
        self.exact.get(mr.canonical_key()).map(String::as_str)
    }

    pub fn bucket(&self, skeleton: &TreeSkeleton) -> &[Exemplar] {
        self.by_skeleton.get(skeleton).map_or(&[], Vec::as_slice)
    }

    pub fn generate_with_tier(&self, mr: &TripleSet) -> Generation {
        if let Some(text) = self.exact(mr) {
            return Generation {
                text: text.to_string(),
                tier: Tier::Exact,
            };
        }
        let bucket = self.bucket(&skeleton(mr));
        if !bucket.is_empty() {
            let query = traversal_order(mr);
            let mut ranked: Vec<(usize, &Exemplar)> = bucket
                .iter()
                .map(|e| {
                    let shared = traversal_order(&e.mr)
                        .iter()
                        .zip(&query)
                        .filter(|(a, b)| a.property == b.property)
                        .count();
                    (shared, e)
                })
                .collect();
            ranked.sort_by_key(|(shared, _)| std::cmp::Reverse(*shared));
            for (_, exemplar) in ranked {
                if let Some(text) = substitute(exemplar, mr) {
                    return Generation {
                        text,
                        tier: Tier::Skeleton,
                    };
                }
            }
            log::debug!(
                "no exemplar of {} could be adapted to {:?}; using template",
                skeleton(mr),
                mr.canonical_key()
            );
        }
        Generation {
            text: template_text(mr),
            tier: Tier::Template,
        }
    }

    pub fn to_json(&self) -> String {
        let file = IndexFile {
            format_version: INDEX_FORMAT_VERSION,
            exact: self.exact.clone(),
            by_skeleton: self
                .by_skeleton
                .iter()
                .map(|(s, b)| (s.to_string(), b.clone()))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("index serializes") + "\n"
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: IndexFile =
            serde_json::from_str(json).map_err(|e| Error::json("retrieval index", e))?;
        if file.format_version != INDEX_FORMAT_VERSION {
            return Err(Error::FormatVersion {
                what: "retrieval index",
                found: file.format_version,
                expected: INDEX_FORMAT_VERSION,
            });
        }
        let mut by_skeleton = BTreeMap::new();
        for (s, bucket) in file.by_skeleton {
            let s = TreeSkeleton::from(s);
            if let Some(e) = bucket.iter().find(|e| skeleton(&e.mr) != s) {
                return Err(Error::InvalidItem(format!(
                    "exemplar {:?} filed under skeleton {s}",
                    e.mr.canonical_key()
                )));
            }
            by_skeleton.insert(s, bucket);
        }
        Ok(RetrievalIndex {
            exact: file.exact,
            by_skeleton,
        })
    }
}

impl GeneratorBackend for RetrievalIndex {
    fn generate(&self, mr: &TripleSet, _context: Option<&str>) -> String {
        self.generate_with_tier(mr).text
    }
}

fn is_word_char(c: Option<char>) -> bool {
    c.is_some_and(char::is_alphanumeric)
}

/// Rewrites the exemplar's text for `query`, matching entities by traversal
/// position. Fails when the entity correspondence is inconsistent, when an
/// exemplar entity that needs replacing is not mentioned verbatim (e.g. it is
/// realised as a pronoun), or when a replaced mention would survive in the
/// output.
fn substitute(exemplar: &Exemplar, query: &TripleSet) -> Option<String> {
    let ex_order = traversal_order(&exemplar.mr);
    let q_order = traversal_order(query);
    if ex_order.len() != q_order.len() {
        return None;
    }
    let mut mapping: BTreeMap<&str, &str> = BTreeMap::new();
    for (e, q) in ex_order.iter().zip(&q_order) {
        for (from, to) in [(&e.subject, &q.subject), (&e.object, &q.object)] {
            match mapping.insert(from, to) {
                Some(prev) if prev != to.as_str() => return None,
                _ => {}
            }
        }
    }

    let mut replacements: Vec<(String, String)> = Vec::new();
    for (from, to) in mapping {
        let (from, to) = (realize_entity(from), realize_entity(to));
        if from == to {
            continue;
        }
        match replacements.iter().find(|(f, _)| *f == from) {
            Some((_, t)) if *t != to => return None,
            Some(_) => {}
            None => replacements.push((from, to)),
        }
    }
    if replacements.is_empty() {
        return Some(exemplar.text.clone());
    }
    // longest surface first so that overlapping mentions prefer the full name
    replacements.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));

    let text = exemplar.text.as_str();
    let mut used = vec![false; replacements.len()];
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < text.len() {
        let before = text[..i].chars().next_back();
        let hit = (!is_word_char(before))
            .then(|| {
                replacements.iter().position(|(from, _)| {
                    text[i..].starts_with(from.as_str())
                        && !is_word_char(text[i + from.len()..].chars().next())
                })
            })
            .flatten();
        match hit {
            Some(r) => {
                out.push_str(&replacements[r].1);
                used[r] = true;
                i += replacements[r].0.len();
            }
            None => {
                let c = text[i..].chars().next().expect("in bounds");
                out.push(c);
                i += c.len_utf8();
            }
        }
    }
    if used.iter().any(|u| !u) {
        return None;
    }
    if replacements.iter().any(|(from, _)| mentions(&out, from)) {
        return None;
    }
    Some(out)
}

/// Whether `surface` occurs in `text` as a whole-word mention.
pub fn mentions(text: &str, surface: &str) -> bool {
    text.match_indices(surface).any(|(i, m)| {
        !is_word_char(text[..i].chars().next_back())
            && !is_word_char(text[i + m.len()..].chars().next())
    })
}
