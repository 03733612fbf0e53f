//! Bundled word lists.

use std::collections::BTreeSet;

const STOPWORDS_EN: &str = include_str!("../resources/stopwords_en.txt");
const PREFIXES: &str = include_str!("../resources/prefixes.txt");
const SUFFIXES: &str = include_str!("../resources/suffixes.txt");

/// Non-empty, non-comment lines.
pub fn lines(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

pub fn english_stopwords() -> BTreeSet<String> {
    lines(STOPWORDS_EN).into_iter().collect()
}

/// Productive English prefixes known to be covered by BERT-style vocabularies.
pub fn default_prefixes() -> Vec<String> {
    lines(PREFIXES)
}

pub fn default_suffixes() -> Vec<String> {
    lines(SUFFIXES)
}
