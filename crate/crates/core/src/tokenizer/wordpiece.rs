use super::vocab::Vocab;
use super::INTERNAL_MARKER;

pub const DEFAULT_MAX_WORD_CHARS: usize = 100;

/// Tokens of one word with their ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenSeq {
    pub tokens: Vec<String>,
    pub ids: Vec<u32>,
}

impl TokenSeq {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn push(&mut self, token: String, id: u32) {
        self.tokens.push(token);
        self.ids.push(id);
    }

    pub fn extend(&mut self, other: TokenSeq) {
        self.tokens.extend(other.tokens);
        self.ids.extend(other.ids);
    }

    /// Concatenation with `##` markers removed.
    pub fn detokenize(&self) -> String {
        self.tokens
            .iter()
            .map(|t| t.strip_prefix(INTERNAL_MARKER).unwrap_or(t))
            .collect()
    }

    pub fn strs(&self) -> Vec<&str> {
        self.tokens.iter().map(String::as_str).collect()
    }
}

fn unk_seq(vocab: &Vocab) -> TokenSeq {
    TokenSeq {
        tokens: vec![vocab.unk().to_string()],
        ids: vec![vocab.unk_id()],
    }
}

fn greedy(word: &str, vocab: &Vocab, max_word_chars: usize, internal_from_start: bool) -> TokenSeq {
    let chars: Vec<char> = word.chars().collect();
    if chars.is_empty() || chars.len() > max_word_chars {
        return unk_seq(vocab);
    }
    let mut out = TokenSeq::default();
    let mut start = 0;
    let mut candidate = String::new();
    while start < chars.len() {
        let mut end = chars.len();
        let mut hit = None;
        while end > start {
            candidate.clear();
            if start > 0 || internal_from_start {
                candidate.push_str(INTERNAL_MARKER);
            }
            candidate.extend(&chars[start..end]);
            if let Some(id) = vocab.id(&candidate) {
                hit = Some(id);
                break;
            }
            end -= 1;
        }
        match hit {
            Some(id) => out.push(candidate.clone(), id),
            None => return unk_seq(vocab),
        }
        start = end;
    }
    out
}

/// Greedy longest-match-first WordPiece: the first piece is looked up in its
/// word-initial form, later pieces with the `##` marker. Any unmatched
/// position, or a word longer than `max_word_chars`, maps the whole word to
/// the unknown token.
pub fn wordpiece_tokenize(word: &str, vocab: &Vocab, max_word_chars: usize) -> TokenSeq {
    greedy(word, vocab, max_word_chars, false)
}

/// Like [`wordpiece_tokenize`] but every piece, including the first, uses the
/// word-internal form.
pub fn wordpiece_internal(word: &str, vocab: &Vocab, max_word_chars: usize) -> TokenSeq {
    greedy(word, vocab, max_word_chars, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokenizer::DEFAULT_UNK;
    use proptest::prelude::*;

    fn mini() -> Vocab {
        let toks = [
            "[PAD]", "[UNK]", "[MASK]", "-", "un", "una", "##llo", "##wed", "allowed", "##all",
            "##owed", "wear", "##wear", "##able", "a", "b", "##a", "##b",
        ];
        Vocab::new(toks.iter().map(|s| s.to_string()).collect(), DEFAULT_UNK).unwrap()
    }

    #[test]
    fn greedy_longest_match() {
        let v = mini();
        assert_eq!(
            wordpiece_tokenize("unallowed", &v, 100).strs(),
            ["una", "##llo", "##wed"]
        );
        assert_eq!(
            wordpiece_tokenize("unwearable", &v, 100).strs(),
            ["un", "##wear", "##able"]
        );
    }

    #[test]
    fn unknown_fallback() {
        let v = mini();
        let seq = wordpiece_tokenize("zzzz", &v, 100);
        assert_eq!(seq.strs(), ["[UNK]"]);
        assert_eq!(seq.ids, vec![1]);
        // partial match still falls back for the whole word
        assert_eq!(wordpiece_tokenize("unz", &v, 100).strs(), ["[UNK]"]);
    }

    #[test]
    fn long_words_are_unknown() {
        let v = mini();
        assert_eq!(wordpiece_tokenize("abab", &v, 3).strs(), ["[UNK]"]);
        assert_eq!(
            wordpiece_tokenize("abab", &v, 4).strs(),
            ["a", "##b", "##a", "##b"]
        );
    }

    #[test]
    fn internal_tokenization() {
        let v = mini();
        assert_eq!(
            wordpiece_internal("allowed", &v, 100).strs(),
            ["##all", "##owed"]
        );
    }

    proptest! {
        #[test]
        fn total_and_detokenizes(word in "[abz]{1,12}") {
            let v = mini();
            let seq = wordpiece_tokenize(&word, &v, 100);
            prop_assert!(!seq.is_empty());
            prop_assert_eq!(seq.tokens.len(), seq.ids.len());
            if seq.tokens != ["[UNK]"] {
                prop_assert_eq!(seq.detokenize(), word);
                prop_assert!(!seq.tokens[0].starts_with("##"));
                prop_assert!(seq.tokens[1..].iter().all(|t| t.starts_with("##")));
            }
        }
    }
}
