use std::cmp::Reverse;

use super::lexicon::Lexicon;
use super::rules::{strip_prefix, strip_suffix};
use super::types::{AffixBundle, Derivation, Shape};

/// Upper bounds on the number of prefixes and suffixes stripped. Only 0 and
/// 1 are meaningful since bundles hold at most one of each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisCaps {
    pub max_prefixes: u8,
    pub max_suffixes: u8,
}

impl Default for AnalysisCaps {
    fn default() -> Self {
        AnalysisCaps {
            max_prefixes: 1,
            max_suffixes: 1,
        }
    }
}

impl AnalysisCaps {
    pub fn allows(&self, shape: Shape) -> bool {
        match shape {
            Shape::P => self.max_prefixes >= 1,
            Shape::S => self.max_suffixes >= 1,
            Shape::PS => self.max_prefixes >= 1 && self.max_suffixes >= 1,
        }
    }
}

/// Preference order: fewer affixes, then longer base, then suffix strips
/// before prefix strips, then label and base for a total order.
fn preference(d: &Derivation) -> (usize, Reverse<usize>, u8, String, String) {
    let strip_rank = match d.shape() {
        Shape::S => 0,
        Shape::P => 1,
        Shape::PS => 2,
    };
    (
        d.bundle.affix_count(),
        Reverse(d.base.len()),
        strip_rank,
        d.bundle.label(),
        d.base.clone(),
    )
}

fn normalize(word: &str) -> Option<String> {
    let w = word.to_lowercase();
    let ok = !w.is_empty()
        && w.bytes().all(|b| b.is_ascii_lowercase() || b == b'-')
        && !w.starts_with('-')
        && !w.ends_with('-');
    ok.then_some(w)
}

/// Every derivation of `word` over the lexicon, most preferred first.
pub fn analyze_all(word: &str, lexicon: &Lexicon, caps: AnalysisCaps) -> Vec<Derivation> {
    let Some(w) = normalize(word) else {
        return Vec::new();
    };
    if lexicon.is_base(&w) {
        return Vec::new();
    }

    let mut found = Vec::new();
    let mut push = |base: String, bundle: AffixBundle| {
        found.push(Derivation {
            surface: w.clone(),
            base,
            bundle,
        });
    };

    if caps.allows(Shape::S) {
        for s in lexicon.suffixes() {
            for stem in strip_suffix(&w, s) {
                if lexicon.is_base(&stem) {
                    push(
                        stem,
                        AffixBundle::suffix_only(s.clone()).expect("suffix bundle"),
                    );
                }
            }
        }
    }
    if caps.allows(Shape::P) || caps.allows(Shape::PS) {
        for p in lexicon.prefixes() {
            for rest in strip_prefix(&w, p) {
                if caps.allows(Shape::P) && lexicon.is_base(&rest) {
                    push(
                        rest.clone(),
                        AffixBundle::prefix_only(p.clone()).expect("prefix bundle"),
                    );
                }
                if caps.allows(Shape::PS) {
                    for s in lexicon.suffixes() {
                        for stem in strip_suffix(&rest, s) {
                            if lexicon.is_base(&stem) {
                                push(
                                    stem,
                                    AffixBundle::new(Some(p.clone()), Some(s.clone()))
                                        .expect("prefix-suffix bundle"),
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    found.sort_by_cached_key(preference);
    found.dedup();
    found
}

/// The preferred derivation of `word`, or `None` if it has no affix over a
/// known base. Words that are bases themselves yield `None`.
pub fn analyze(word: &str, lexicon: &Lexicon, caps: AnalysisCaps) -> Option<Derivation> {
    analyze_all(word, lexicon, caps).into_iter().next()
}

/// True when `a` is strictly preferred over `b` by the analyzer.
pub fn prefers(a: &Derivation, b: &Derivation) -> bool {
    preference(a) < preference(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> Lexicon {
        Lexicon::from_forms(
            ["un", "anti", "re"],
            ["able", "er", "ness"],
            ["wear", "boxing", "walk", "allowed"],
            ["the"],
        )
        .unwrap()
    }

    #[test]
    fn unwearable() {
        let d = analyze("unwearable", &lex(), AnalysisCaps::default()).unwrap();
        assert_eq!(d.base, "wear");
        assert_eq!(d.bundle.label(), "un##able");
        assert_eq!(d.shape(), Shape::PS);
    }

    #[test]
    fn base_alone_is_not_a_derivative() {
        assert!(analyze("wear", &lex(), AnalysisCaps::default()).is_none());
    }

    #[test]
    fn antiboxing() {
        let d = analyze("antiboxing", &lex(), AnalysisCaps::default()).unwrap();
        assert_eq!(d.base, "boxing");
        assert_eq!(d.bundle.label(), "anti");
        assert_eq!(d.shape(), Shape::P);
    }

    #[test]
    fn uppercase_input_is_lowercased() {
        let d = analyze("UnWearable", &lex(), AnalysisCaps::default()).unwrap();
        assert_eq!(d.surface, "unwearable");
    }

    #[test]
    fn caps_restrict_shapes() {
        let only_prefix = AnalysisCaps {
            max_prefixes: 1,
            max_suffixes: 0,
        };
        assert!(analyze("unwearable", &lex(), only_prefix).is_none());
        assert!(analyze("walkable", &lex(), only_prefix).is_none());
        assert_eq!(
            analyze("unallowed", &lex(), only_prefix).unwrap().base,
            "allowed"
        );
    }

    #[test]
    fn prefix_strip_does_not_enforce_base() {
        // "underdog" strips to "derdog", which is not a base
        assert!(analyze("underdog", &lex(), AnalysisCaps::default()).is_none());
    }

    #[test]
    fn non_words_rejected() {
        assert!(analyze("", &lex(), AnalysisCaps::default()).is_none());
        assert!(analyze("walk3r", &lex(), AnalysisCaps::default()).is_none());
        assert!(analyze("-walker", &lex(), AnalysisCaps::default()).is_none());
    }

    #[test]
    fn fewer_affixes_preferred() {
        let lex = Lexicon::from_forms(["un"], ["able"], ["wear", "wearable"], []).unwrap();
        let all = analyze_all("unwearable", &lex, AnalysisCaps::default());
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].base, "wearable");
        assert_eq!(all[0].shape(), Shape::P);
    }

    #[test]
    fn suffix_strip_preferred_on_equal_base_length() {
        // "rewalk" + ... contrived: base "walker" via prefix vs "rewalk" via suffix
        let lex = Lexicon::from_forms(["re"], ["er"], ["walker", "rewalk"], []).unwrap();
        let d = analyze("rewalker", &lex, AnalysisCaps::default()).unwrap();
        assert_eq!(d.base, "rewalk");
        assert_eq!(d.shape(), Shape::S);
    }
}
