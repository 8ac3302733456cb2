const SPLIT_PUNCT: &[char] = &['.', ',', ';', ':', '!', '?', '(', ')', '"', '\''];

/// Whitespace tokenization with leading and trailing punctuation
/// (`.,;:!?()"'`) split off as separate tokens. Case is preserved.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let mut rest = chunk;
        while let Some(c) = rest.chars().next().filter(|c| SPLIT_PUNCT.contains(c)) {
            tokens.push(c.to_string());
            rest = &rest[c.len_utf8()..];
        }
        let mut trailing = Vec::new();
        while let Some(c) = rest.chars().next_back().filter(|c| SPLIT_PUNCT.contains(c)) {
            trailing.push(c.to_string());
            rest = &rest[..rest.len() - c.len_utf8()];
        }
        if !rest.is_empty() {
            tokens.push(rest.to_string());
        }
        tokens.extend(trailing.into_iter().rev());
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentence() {
        assert_eq!(
            tokenize("John Madin was born in Birmingham."),
            ["John", "Madin", "was", "born", "in", "Birmingham", "."]
        );
    }

    #[test]
    fn empty_and_whitespace() {
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("a  b"), ["a", "b"]);
        assert_eq!(tokenize(" \t\n"), Vec::<String>::new());
    }

    #[test]
    fn punctuation_runs() {
        assert_eq!(tokenize("(Labour politician)."), ["(", "Labour", "politician", ")", "."]);
        assert_eq!(tokenize("..."), [".", ".", "."]);
        assert_eq!(tokenize("Shepard's 5.5"), ["Shepard's", "5.5"]);
        assert_eq!(tokenize("\"Hi,\""), ["\"", "Hi", ",", "\""]);
    }
}
