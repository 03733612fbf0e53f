//! Spelling rules at affix boundaries.
//!
//! Forward rules (suffixation of a stem):
//!
//! * plain concatenation, always licensed;
//! * e-deletion: stem-final `e` drops before a vowel-initial suffix
//!   (`google` + `able` → `googlable`);
//! * consonant doubling: a stem ending consonant-vowel-consonant doubles the
//!   final consonant before a vowel-initial suffix (`swim` + `er` → `swimmer`);
//! * y→i: stem-final `y` after a consonant becomes `i` before a suffix not
//!   starting with `i` (`happy` + `ness` → `happiness`);
//! * `-able` + `ity` → `-ability` (`applicable` → `applicability`).
//!
//! Prefixes concatenate unchanged; an optional hyphen after the prefix is
//! tolerated when stripping.
//!
//! Stripping inverts every forward rule and then keeps only the stems whose
//! forward application reproduces the word, so `strip_suffix` and
//! [`derive_suffix`] are exact adjoints over alphabetic stems.

use std::collections::BTreeSet;

use super::types::{Affix, AffixBundle, AffixKind};

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn is_alpha(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_lowercase())
}

fn vowel_initial(suffix: &str) -> bool {
    suffix
        .bytes()
        .next()
        .is_some_and(|c| is_vowel(c) || c == b'y')
}

fn doubles_final_consonant(stem: &[u8]) -> bool {
    let n = stem.len();
    if n < 3 {
        return false;
    }
    let (c1, v, c2) = (stem[n - 3], stem[n - 2], stem[n - 1]);
    !is_vowel(c2) && !matches!(c2, b'w' | b'x' | b'y') && is_vowel(v) && !is_vowel(c1)
}

/// Every spelling of `stem` + `suffix` the rules license.
pub fn derive_suffix(stem: &str, suffix: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    if stem.is_empty() || suffix.is_empty() {
        return out;
    }
    out.insert(format!("{stem}{suffix}"));
    let bytes = stem.as_bytes();
    let last = bytes[bytes.len() - 1];

    if vowel_initial(suffix) {
        if last == b'e' && stem.len() >= 2 {
            out.insert(format!("{}{suffix}", &stem[..stem.len() - 1]));
        }
        if doubles_final_consonant(bytes) {
            out.insert(format!("{stem}{}{suffix}", last as char));
        }
    }
    if last == b'y'
        && stem.len() >= 2
        && !is_vowel(bytes[bytes.len() - 2])
        && !suffix.starts_with('i')
    {
        out.insert(format!("{}i{suffix}", &stem[..stem.len() - 1]));
    }
    if suffix == "ity" {
        if let Some(head) = stem.strip_suffix("able") {
            out.insert(format!("{head}ability"));
        }
    }
    out
}

pub fn derive_prefix(base: &str, prefix: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    if !base.is_empty() && !prefix.is_empty() {
        out.insert(format!("{prefix}{base}"));
    }
    out
}

/// All surface forms of `base` carrying `bundle`. The suffix is attached
/// first, then the prefix.
pub fn derive(base: &str, bundle: &AffixBundle) -> BTreeSet<String> {
    let suffixed = match bundle.suffix() {
        Some(s) => derive_suffix(base, s.form()),
        None => BTreeSet::from([base.to_string()]),
    };
    match bundle.prefix() {
        Some(p) => suffixed
            .iter()
            .flat_map(|w| derive_prefix(w, p.form()))
            .collect(),
        None => suffixed,
    }
}

/// Candidate stems `s` with `word ∈ derive_suffix(s, suffix)`.
pub fn strip_suffix(word: &str, suffix: &Affix) -> BTreeSet<String> {
    debug_assert_eq!(suffix.kind(), AffixKind::Suffix);
    let form = suffix.form();
    let Some(raw) = word.strip_suffix(form) else {
        return BTreeSet::new();
    };
    if raw.is_empty() {
        return BTreeSet::new();
    }

    let mut proposals = vec![raw.to_string(), format!("{raw}e")];
    let rb = raw.as_bytes();
    let n = rb.len();
    if n >= 2 && rb[n - 1] == rb[n - 2] && !is_vowel(rb[n - 1]) {
        proposals.push(raw[..n - 1].to_string());
    }
    if let Some(head) = raw.strip_suffix('i') {
        proposals.push(format!("{head}y"));
    }
    if form == "ity" {
        if let Some(head) = raw.strip_suffix("abil") {
            proposals.push(format!("{head}able"));
        }
    }

    proposals
        .into_iter()
        .filter(|stem| is_alpha(stem) && derive_suffix(stem, form).contains(word))
        .collect()
}

/// Candidate stems after removing `prefix`, tolerating one hyphen after it.
/// Base membership is not checked here.
pub fn strip_prefix(word: &str, prefix: &Affix) -> BTreeSet<String> {
    debug_assert_eq!(prefix.kind(), AffixKind::Prefix);
    let mut out = BTreeSet::new();
    if let Some(rest) = word.strip_prefix(prefix.form()) {
        let rest = rest.strip_prefix('-').unwrap_or(rest);
        if !rest.is_empty() {
            out.insert(rest.to_string());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sfx(s: &str) -> Affix {
        Affix::suffix(s).unwrap()
    }

    fn pfx(s: &str) -> Affix {
        Affix::prefix(s).unwrap()
    }

    #[test]
    fn strip_suffix_examples() {
        assert!(strip_suffix("applicability", &sfx("ity")).contains("applicable"));
        assert!(strip_suffix("walkable", &sfx("able")).contains("walk"));
        assert!(strip_suffix("happiness", &sfx("ness")).contains("happy"));
        assert!(strip_suffix("swimmer", &sfx("er")).contains("swim"));
        assert!(strip_suffix("googlable", &sfx("able")).contains("google"));
    }

    #[test]
    fn happy_ness_round_trips_forward() {
        assert!(derive_suffix("happy", "ness").contains("happiness"));
    }

    #[test]
    fn strip_suffix_without_match_is_empty() {
        assert!(strip_suffix("walk", &sfx("able")).is_empty());
        assert!(strip_suffix("able", &sfx("able")).is_empty());
    }

    #[test]
    fn strip_prefix_examples() {
        assert_eq!(
            strip_prefix("unwearable", &pfx("un")),
            BTreeSet::from(["wearable".to_string()])
        );
        assert_eq!(
            strip_prefix("anti-war", &pfx("anti")),
            BTreeSet::from(["war".to_string()])
        );
        assert_eq!(
            strip_prefix("underdog", &pfx("un")),
            BTreeSet::from(["derdog".to_string()])
        );
        assert!(strip_prefix("un", &pfx("un")).is_empty());
        assert!(strip_prefix("wear", &pfx("un")).is_empty());
    }

    #[test]
    fn derive_examples() {
        let un_able = AffixBundle::from_forms(Some("un"), Some("able")).unwrap();
        assert_eq!(
            derive("google", &un_able),
            BTreeSet::from(["ungoogleable".to_string(), "ungooglable".to_string()])
        );
        let er = AffixBundle::from_forms(None, Some("er")).unwrap();
        assert_eq!(derive("walk", &er), BTreeSet::from(["walker".to_string()]));
        let ness = AffixBundle::from_forms(None, Some("ness")).unwrap();
        assert_eq!(
            derive("celebrity", &ness),
            BTreeSet::from(["celebrityness".to_string(), "celebritiness".to_string()])
        );
    }

    #[test]
    fn y_to_i_skips_vowel_y_and_i_suffixes() {
        assert_eq!(
            derive_suffix("play", "ful"),
            BTreeSet::from(["playful".to_string()])
        );
        assert!(!derive_suffix("happy", "ish").contains("happiish"));
    }

    #[test]
    fn derive_always_contains_concatenation() {
        let b = AffixBundle::from_forms(Some("re"), Some("able")).unwrap();
        assert!(derive("use", &b).contains("reuseable"));
        assert!(derive("use", &b).contains("reusable"));
    }

    const SUFFIXES: &[&str] = &[
        "able", "ity", "ness", "er", "y", "ful", "ish", "ize", "ist", "ee", "ly", "ment", "al",
    ];

    proptest! {
        #[test]
        fn strip_derive_adjoint(stem in "[a-z]{1,8}", idx in 0..SUFFIXES.len()) {
            let x = SUFFIXES[idx];
            for w in derive_suffix(&stem, x) {
                prop_assert!(strip_suffix(&w, &sfx(x)).contains(&stem), "{stem}+{x} -> {w}");
            }
        }

        #[test]
        fn strip_outputs_derive_back(word in "[a-z]{2,12}", idx in 0..SUFFIXES.len()) {
            let x = SUFFIXES[idx];
            for stem in strip_suffix(&word, &sfx(x)) {
                prop_assert!(derive_suffix(&stem, x).contains(&word));
            }
        }
    }
}
