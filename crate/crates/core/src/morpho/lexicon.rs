use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::types::{Affix, AffixKind};
use crate::error::{Error, Result};

/// Minimum base length is exclusive: bases have more than this many letters.
const MIN_BASE_LEN: usize = 3;

/// Affix and base inventory driving derivative extraction. Immutable once
/// built.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    prefixes: BTreeSet<Affix>,
    suffixes: BTreeSet<Affix>,
    bases: BTreeSet<String>,
    stopwords: BTreeSet<String>,
}

fn valid_base(b: &str) -> bool {
    b.len() > MIN_BASE_LEN && b.bytes().all(|c| c.is_ascii_lowercase())
}

impl Lexicon {
    /// Checks the invariants: bases are alphabetic, longer than three letters
    /// and disjoint from affix forms and stopwords.
    pub fn new(
        prefixes: BTreeSet<Affix>,
        suffixes: BTreeSet<Affix>,
        bases: BTreeSet<String>,
        stopwords: BTreeSet<String>,
    ) -> Result<Self> {
        if prefixes.iter().any(|a| a.kind() != AffixKind::Prefix)
            || suffixes.iter().any(|a| a.kind() != AffixKind::Suffix)
        {
            return Err(Error::InvalidInput(
                "affix set holds an affix of the wrong kind".into(),
            ));
        }
        for b in &bases {
            if !valid_base(b) {
                return Err(Error::InvalidInput(format!(
                    "base `{b}` must be lowercase alphabetic with more than {MIN_BASE_LEN} letters"
                )));
            }
            if stopwords.contains(b) {
                return Err(Error::InvalidInput(format!("base `{b}` is a stopword")));
            }
            if prefixes.iter().chain(&suffixes).any(|a| a.form() == b) {
                return Err(Error::InvalidInput(format!("base `{b}` is also an affix")));
            }
        }
        Ok(Lexicon {
            prefixes,
            suffixes,
            bases,
            stopwords,
        })
    }

    /// Convenience constructor from plain forms.
    pub fn from_forms<'a>(
        prefixes: impl IntoIterator<Item = &'a str>,
        suffixes: impl IntoIterator<Item = &'a str>,
        bases: impl IntoIterator<Item = &'a str>,
        stopwords: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self> {
        Self::new(
            prefixes
                .into_iter()
                .map(Affix::prefix)
                .collect::<Result<_>>()?,
            suffixes
                .into_iter()
                .map(Affix::suffix)
                .collect::<Result<_>>()?,
            bases.into_iter().map(str::to_string).collect(),
            stopwords.into_iter().map(str::to_string).collect(),
        )
    }

    pub fn prefixes(&self) -> &BTreeSet<Affix> {
        &self.prefixes
    }

    pub fn suffixes(&self) -> &BTreeSet<Affix> {
        &self.suffixes
    }

    pub fn bases(&self) -> &BTreeSet<String> {
        &self.bases
    }

    pub fn stopwords(&self) -> &BTreeSet<String> {
        &self.stopwords
    }

    pub fn is_base(&self, w: &str) -> bool {
        self.bases.contains(w)
    }

    pub fn has_affix(&self, a: &Affix) -> bool {
        match a.kind() {
            AffixKind::Prefix => self.prefixes.contains(a),
            AffixKind::Suffix => self.suffixes.contains(a),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let sections: [(&str, Vec<&str>); 4] = [
            ("prefixes", self.prefixes.iter().map(Affix::form).collect()),
            ("suffixes", self.suffixes.iter().map(Affix::form).collect()),
            ("bases", self.bases.iter().map(String::as_str).collect()),
            (
                "stopwords",
                self.stopwords.iter().map(String::as_str).collect(),
            ),
        ];
        for (name, entries) in sections {
            let _ = writeln!(out, "[{name}]");
            for e in entries {
                out.push_str(e);
                out.push('\n');
            }
        }
        out
    }

    /// Parses the sectioned text format written by [`to_text`](Self::to_text).
    pub fn from_text(text: &str) -> Result<Self> {
        let mut sections: [BTreeSet<String>; 4] = Default::default();
        let mut current: Option<usize> = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                current = Some(match name {
                    "prefixes" => 0,
                    "suffixes" => 1,
                    "bases" => 2,
                    "stopwords" => 3,
                    other => {
                        return Err(Error::Parse(format!(
                            "line {}: unknown lexicon section `{other}`",
                            lineno + 1
                        )))
                    }
                });
                continue;
            }
            let Some(idx) = current else {
                return Err(Error::Parse(format!(
                    "line {}: entry outside of any section",
                    lineno + 1
                )));
            };
            sections[idx].insert(line.to_string());
        }
        let [p, s, b, w] = sections;
        Self::new(
            p.iter().map(|f| Affix::prefix(f)).collect::<Result<_>>()?,
            s.iter().map(|f| Affix::suffix(f)).collect::<Result<_>>()?,
            b,
            w,
        )
    }
}

/// Builds the lexicon from a WordPiece vocabulary.
///
/// Prefixes are candidates present as word-initial tokens, suffixes are
/// candidates present as `##` word-internal tokens, and bases are all
/// word-initial alphabetic tokens longer than three letters that are neither
/// stopwords nor one of the identified affixes.
pub fn build_lexicon<S: AsRef<str>>(
    vocab: &[S],
    prefix_candidates: &[S],
    suffix_candidates: &[S],
    stopwords: &BTreeSet<String>,
) -> Result<Lexicon> {
    if prefix_candidates.is_empty() {
        return Err(Error::EmptyCandidates("prefix"));
    }
    if suffix_candidates.is_empty() {
        return Err(Error::EmptyCandidates("suffix"));
    }

    let mut initial = BTreeSet::new();
    let mut internal = BTreeSet::new();
    for tok in vocab {
        let tok = tok.as_ref();
        match tok.strip_prefix("##") {
            Some(rest) if !rest.is_empty() => {
                internal.insert(rest);
            }
            Some(_) => {}
            None => {
                initial.insert(tok);
            }
        }
    }
    if internal.is_empty() {
        return Err(Error::MalformedVocab("no word-internal (##) tokens".into()));
    }

    let normalize = |c: &str| c.trim().trim_start_matches("##").to_ascii_lowercase();

    let prefixes: BTreeSet<Affix> = prefix_candidates
        .iter()
        .map(|c| normalize(c.as_ref()))
        .filter(|c| initial.contains(c.as_str()))
        .map(|c| Affix::prefix(&c))
        .collect::<Result<_>>()?;
    let suffixes: BTreeSet<Affix> = suffix_candidates
        .iter()
        .map(|c| normalize(c.as_ref()))
        .filter(|c| internal.contains(c.as_str()))
        .map(|c| Affix::suffix(&c))
        .collect::<Result<_>>()?;

    let affix_forms: BTreeSet<&str> = prefixes.iter().chain(&suffixes).map(Affix::form).collect();
    let bases = initial
        .iter()
        .filter(|t| valid_base(t) && !stopwords.contains(**t) && !affix_forms.contains(**t))
        .map(|t| t.to_string())
        .collect();

    Lexicon::new(prefixes, suffixes, bases, stopwords.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn builds_from_mini_vocab() {
        let vocab = ["walk", "##able", "un", "the"];
        let lex = build_lexicon(&vocab, &["un"], &["able"], &set(&["the"])).unwrap();
        assert_eq!(
            lex.prefixes().iter().map(Affix::form).collect::<Vec<_>>(),
            ["un"]
        );
        assert_eq!(
            lex.suffixes().iter().map(Affix::form).collect::<Vec<_>>(),
            ["able"]
        );
        assert_eq!(lex.bases(), &set(&["walk"]));
    }

    #[test]
    fn suffix_must_be_word_internal() {
        let vocab = ["able", "walk", "##ing"];
        let lex = build_lexicon(&vocab, &["un"], &["able"], &BTreeSet::new()).unwrap();
        assert!(lex.suffixes().is_empty());
        assert!(lex.prefixes().is_empty());
        // not identified as a suffix, so it remains an ordinary base
        assert!(lex.is_base("able"));
    }

    #[test]
    fn affix_forms_are_excluded_from_bases() {
        let vocab = ["anti", "counter", "##ness", "ness", "mega", "house"];
        let lex = build_lexicon(&vocab, &["anti", "counter"], &["ness"], &BTreeSet::new()).unwrap();
        assert!(!lex.is_base("anti"));
        assert!(!lex.is_base("counter"));
        assert!(!lex.is_base("ness"));
        assert!(lex.is_base("mega"));
        assert!(lex.is_base("house"));
    }

    #[test]
    fn non_alphabetic_tokens_are_not_bases() {
        let vocab = ["[UNK]", "co-op", "1234", "wéar", "##s", "house"];
        let lex = build_lexicon(&vocab, &["un"], &["s"], &BTreeSet::new()).unwrap();
        assert_eq!(lex.bases(), &set(&["house"]));
    }

    #[test]
    fn build_errors() {
        let vocab = ["walk", "un"];
        let empty: [&str; 0] = [];
        assert!(matches!(
            build_lexicon(&vocab, &empty, &["able"], &BTreeSet::new()),
            Err(Error::EmptyCandidates("prefix"))
        ));
        assert!(matches!(
            build_lexicon(&vocab, &["un"], &empty, &BTreeSet::new()),
            Err(Error::EmptyCandidates("suffix"))
        ));
        assert!(matches!(
            build_lexicon(&vocab, &["un"], &["able"], &BTreeSet::new()),
            Err(Error::MalformedVocab(_))
        ));
    }

    #[test]
    fn invariants_checked() {
        assert!(Lexicon::from_forms(["un"], ["able"], ["war"], []).is_err());
        assert!(Lexicon::from_forms(["un"], ["able"], ["then"], ["then"]).is_err());
        assert!(Lexicon::from_forms(["anti"], [], ["anti"], []).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let lex =
            Lexicon::from_forms(["un", "anti"], ["able"], ["wear", "boxing"], ["the"]).unwrap();
        let text = lex.to_text();
        assert!(text.starts_with("[prefixes]\nanti\nun\n[suffixes]\nable\n[bases]\n"));
        assert_eq!(Lexicon::from_text(&text).unwrap(), lex);
    }

    #[test]
    fn text_format_errors() {
        assert!(Lexicon::from_text("walk\n").is_err());
        assert!(Lexicon::from_text("[affixes]\nun\n").is_err());
    }
}
