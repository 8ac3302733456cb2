use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Abbreviations used when no lexicon file is given.
pub const DEFAULT_ABBREVIATIONS: &[&str] = &[
    "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "St.", "Jr.", "Sr.", "Mt.", "Ft.", "Gen.", "Col.", "Lt.",
    "Sgt.", "Capt.", "Gov.", "Sen.", "Rep.", "Rev.", "Hon.", "vs.", "No.", "e.g.", "i.e.", "approx.",
    "Jan.", "Feb.", "Mar.", "Apr.", "Aug.", "Sep.", "Sept.", "Oct.", "Nov.", "Dec.",
];

const CLOSERS: &[char] = &['"', '\'', ')', ']', '”', '’'];
const OPENERS: &[char] = &['"', '\'', '(', '[', '“', '‘'];

/// A verbalisation and its sentences.
///
/// Joining `sentences` with single spaces gives `raw` with its whitespace
/// collapsed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Text {
    raw: String,
    sentences: Vec<String>,
}

impl Text {
    /// Wraps an explicit segmentation, checking it against `raw`.
    pub fn from_sentences(raw: impl Into<String>, sentences: Vec<String>) -> Result<Self> {
        let raw = raw.into();
        check_segmentation(&raw, &sentences)?;
        Ok(Text { raw, sentences })
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn sentences(&self) -> &[String] {
        &self.sentences
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_single_sentence(&self) -> bool {
        self.sentences.len() == 1
    }
}

fn normalize(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn check_segmentation(raw: &str, sentences: &[String]) -> Result<()> {
    let bad = |reason: &str| Error::BadOverride {
        raw: raw.to_string(),
        reason: reason.to_string(),
    };
    if sentences.is_empty() {
        return Err(bad("no sentences"));
    }
    if sentences.iter().any(|s| s.trim().is_empty()) {
        return Err(bad("empty sentence"));
    }
    let joined = sentences.iter().map(|s| normalize(s)).collect::<Vec<_>>().join(" ");
    if joined != normalize(raw) {
        return Err(bad("sentences do not join back to the text"));
    }
    Ok(())
}

/// Rule-based sentence splitter with an abbreviation lexicon and a table of
/// hand-corrected segmentations.
#[derive(Debug, Clone)]
pub struct Segmenter {
    abbreviations: HashSet<String>,
    lowercase_abbreviations: HashSet<String>,
    overrides: HashMap<String, Vec<String>>,
}

impl Default for Segmenter {
    fn default() -> Self {
        Segmenter::new(DEFAULT_ABBREVIATIONS.iter().map(|s| s.to_string()))
    }
}

impl Segmenter {
    pub fn new(abbreviations: impl IntoIterator<Item = String>) -> Self {
        let abbreviations: HashSet<String> = abbreviations
            .into_iter()
            .map(|a| a.trim().to_string())
            .filter(|a| !a.is_empty())
            .collect();
        let lowercase_abbreviations = abbreviations.iter().map(|a| a.to_lowercase()).collect();
        Segmenter {
            abbreviations,
            lowercase_abbreviations,
            overrides: HashMap::new(),
        }
    }

    /// Adds hand-corrected segmentations, keyed by the raw text. Every
    /// override must join back to its key.
    pub fn with_overrides(mut self, overrides: HashMap<String, Vec<String>>) -> Result<Self> {
        for (raw, sentences) in overrides {
            check_segmentation(&raw, &sentences)?;
            let sentences = sentences.iter().map(|s| normalize(s)).collect();
            self.overrides.insert(normalize(&raw), sentences);
        }
        Ok(self)
    }

    /// Reads a lexicon file, one abbreviation per line. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn load_abbreviations(path: &Path) -> Result<Vec<String>> {
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(content
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(String::from)
            .collect())
    }

    /// Reads a JSON object mapping raw text to its list of sentences.
    pub fn load_overrides(path: &Path) -> Result<HashMap<String, Vec<String>>> {
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&content).map_err(|e| Error::json(path.display().to_string(), e))
    }

    /// Splits `raw` into sentences. An override wins if one exists; otherwise
    /// a sentence ends at a token ending in `.`, `!` or `?` when the next token
    /// starts with an uppercase letter (or there is no next token), unless the
    /// token is a known abbreviation or a single-letter initial, or the token
    /// sits inside parentheses.
    pub fn split(&self, raw: &str) -> Vec<String> {
        let normalized = normalize(raw);
        if let Some(sentences) = self.overrides.get(&normalized) {
            return sentences.clone();
        }
        let tokens: Vec<&str> = normalized.split(' ').filter(|t| !t.is_empty()).collect();
        let mut sentences = Vec::new();
        let mut current: Vec<&str> = Vec::new();
        let mut depth: usize = 0;
        for (i, &tok) in tokens.iter().enumerate() {
            current.push(tok);
            for c in tok.chars() {
                match c {
                    '(' => depth += 1,
                    ')' => depth = depth.saturating_sub(1),
                    _ => {}
                }
            }
            if depth > 0 || !self.is_boundary(tok, tokens.get(i + 1).copied()) {
                continue;
            }
            sentences.push(current.join(" "));
            current.clear();
        }
        if !current.is_empty() {
            sentences.push(current.join(" "));
        }
        sentences
    }

    fn is_boundary(&self, tok: &str, next: Option<&str>) -> bool {
        let core = tok.trim_end_matches(CLOSERS);
        let Some(last) = core.chars().last() else {
            return false;
        };
        if !matches!(last, '.' | '!' | '?') {
            return false;
        }
        if let Some(next) = next {
            let starts_upper = next
                .trim_start_matches(OPENERS)
                .chars()
                .next()
                .is_some_and(char::is_uppercase);
            if !starts_upper {
                return false;
            }
        }
        !(last == '.' && (self.is_abbreviation(core) || is_initial(core)))
    }

    fn is_abbreviation(&self, core: &str) -> bool {
        let word = core.trim_start_matches(OPENERS);
        self.abbreviations.contains(word)
            || self.lowercase_abbreviations.contains(&word.to_lowercase())
    }

    pub fn segment(&self, raw: &str) -> Text {
        Text {
            raw: raw.to_string(),
            sentences: self.split(raw),
        }
    }
}

fn is_initial(core: &str) -> bool {
    let word = core.trim_start_matches(OPENERS);
    let mut chars = word.chars();
    matches!((chars.next(), chars.next(), chars.next()), (Some(c), Some('.'), None) if c.is_uppercase())
}

pub fn segment_sentences(raw: &str, segmenter: &Segmenter) -> Text {
    segmenter.segment(raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn birmingham_text_has_two_sentences() {
        let seg = Segmenter::default();
        let t = seg.segment("John Madin was born in Birmingham. He was the architect of 103 Colmore Row.");
        assert_eq!(
            t.sentences(),
            ["John Madin was born in Birmingham.", "He was the architect of 103 Colmore Row."]
        );
    }

    #[test]
    fn detached_period_is_one_sentence() {
        assert_eq!(Segmenter::default().split("A b c ."), ["A b c ."]);
    }

    #[test]
    fn abbreviation_suppresses_split() {
        let seg = Segmenter::new(["St.".to_string()]);
        assert_eq!(seg.split("It is in St. Louis."), ["It is in St. Louis."]);
        let bare = Segmenter::new(Vec::<String>::new());
        assert_eq!(bare.split("It is in St. Louis."), ["It is in St.", "Louis."]);
    }

    #[test]
    fn initials_and_lowercase_continuations() {
        let seg = Segmenter::new(Vec::<String>::new());
        assert_eq!(seg.split("Written by J. R. Smith. It sold well."), [
            "Written by J. R. Smith.",
            "It sold well."
        ]);
        assert_eq!(seg.split("It is 5.5 m. long and wide."), ["It is 5.5 m. long and wide."]);
    }

    #[test]
    fn no_split_inside_parentheses() {
        let seg = Segmenter::default();
        assert_eq!(
            seg.split("The club (founded 1900. Renamed later) plays here. It is old."),
            ["The club (founded 1900. Renamed later) plays here.", "It is old."]
        );
    }

    #[test]
    fn question_and_exclamation() {
        let seg = Segmenter::default();
        assert_eq!(seg.split("Really? Yes! \"Quoted.\" Done"), [
            "Really?",
            "Yes!",
            "\"Quoted.\"",
            "Done"
        ]);
    }

    #[test]
    fn overrides_win() {
        let mut map = HashMap::new();
        map.insert(
            "Born in Nice.  Raised in Rome".to_string(),
            vec!["Born in Nice.".to_string(), "Raised in Rome".to_string()],
        );
        let seg = Segmenter::new(Vec::<String>::new()).with_overrides(map).unwrap();
        assert_eq!(seg.split("Born in Nice. Raised in Rome").len(), 2);
        assert_eq!(seg.split("Born in Nice.   Raised   in Rome").len(), 2);
    }

    #[test]
    fn inconsistent_override_is_rejected() {
        let mut map = HashMap::new();
        map.insert("A b.".to_string(), vec!["A".to_string(), "c.".to_string()]);
        assert!(matches!(
            Segmenter::default().with_overrides(map),
            Err(Error::BadOverride { .. })
        ));
    }

    #[test]
    fn whitespace_is_collapsed() {
        let t = Segmenter::default().segment("  A  b.\n C d. ");
        assert_eq!(t.sentences(), ["A b.", "C d."]);
        assert_eq!(t.sentences().join(" "), normalize(t.raw()));
    }
}
