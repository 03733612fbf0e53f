use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::vocab::Vocab;
use super::wordpiece::{wordpiece_internal, wordpiece_tokenize, TokenSeq, DEFAULT_MAX_WORD_CHARS};
use super::INTERNAL_MARKER;
use crate::error::{Error, Result};
use crate::morpho::Derivation;

/// How a prefixed derivative is laid out for the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SegmentationMethod {
    /// prefix, `-`, base in word-initial form
    Hyp,
    /// prefix, base in word-initial form
    Init,
    /// prefix, base re-tokenized into word-internal pieces
    Tok,
    /// prefix, `##base` whose embedding is projected from the word-initial one
    Proj,
}

impl SegmentationMethod {
    pub const ALL: [SegmentationMethod; 4] = [
        SegmentationMethod::Hyp,
        SegmentationMethod::Init,
        SegmentationMethod::Tok,
        SegmentationMethod::Proj,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SegmentationMethod::Hyp => "HYP",
            SegmentationMethod::Init => "INIT",
            SegmentationMethod::Tok => "TOK",
            SegmentationMethod::Proj => "PROJ",
        }
    }
}

impl fmt::Display for SegmentationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SegmentationMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "HYP" => Ok(Self::Hyp),
            "INIT" => Ok(Self::Init),
            "TOK" => Ok(Self::Tok),
            "PROJ" => Ok(Self::Proj),
            _ => Err(Error::Parse(format!("unknown segmentation method `{s}`"))),
        }
    }
}

/// Token layout of one derivative slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentedWord {
    pub tokens: TokenSeq,
    /// Affix positions, the ones a cloze model has to recover.
    pub maskable: Vec<bool>,
    /// Positions whose embedding must be taken from the projection table
    /// rather than the vocabulary (PROJ only; the id is the word-initial one).
    pub projected: Vec<bool>,
}

impl SegmentedWord {
    fn push(&mut self, token: String, id: u32, maskable: bool, projected: bool) {
        self.tokens.push(token, id);
        self.maskable.push(maskable);
        self.projected.push(projected);
    }

    fn extend_plain(&mut self, seq: TokenSeq) {
        let n = seq.len();
        self.tokens.extend(seq);
        self.maskable.extend(std::iter::repeat_n(false, n));
        self.projected.extend(std::iter::repeat_n(false, n));
    }

    pub fn masked_positions(&self) -> Vec<usize> {
        self.maskable
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect()
    }
}

fn require(vocab: &Vocab, token: &str) -> Result<u32> {
    vocab
        .id(token)
        .ok_or_else(|| Error::NotInVocab(token.to_string()))
}

fn check_hyphen(vocab: &Vocab) -> Result<u32> {
    if let Some(t) = vocab
        .tokens()
        .iter()
        .find(|t| t.len() > 1 && t.starts_with('-'))
    {
        return Err(Error::HyphenConflict(t.clone()));
    }
    require(vocab, "-")
}

/// Segments a derivative for presentation to a subword model. The suffix, if
/// any, is always the `##` form of the suffix; the prefix (if any) is a
/// word-initial token and the base layout depends on `method`.
pub fn segment(
    derivation: &Derivation,
    method: SegmentationMethod,
    vocab: &Vocab,
) -> Result<SegmentedWord> {
    let mut out = SegmentedWord {
        tokens: TokenSeq::default(),
        maskable: Vec::new(),
        projected: Vec::new(),
    };
    let base = derivation.base.as_str();
    let initial_base = || wordpiece_tokenize(base, vocab, DEFAULT_MAX_WORD_CHARS);

    match derivation.bundle.prefix() {
        Some(prefix) => {
            let pid = require(vocab, prefix.form())?;
            out.push(prefix.form().to_string(), pid, true, false);
            match method {
                SegmentationMethod::Hyp => {
                    let hid = check_hyphen(vocab)?;
                    out.push("-".to_string(), hid, false, false);
                    out.extend_plain(initial_base());
                }
                SegmentationMethod::Init => out.extend_plain(initial_base()),
                SegmentationMethod::Tok => {
                    out.extend_plain(wordpiece_internal(base, vocab, DEFAULT_MAX_WORD_CHARS))
                }
                SegmentationMethod::Proj => {
                    let internal = format!("{INTERNAL_MARKER}{base}");
                    match vocab.id(&internal) {
                        Some(id) => out.push(internal, id, false, false),
                        None => {
                            let id = vocab
                                .id(base)
                                .ok_or_else(|| Error::NotInVocab(base.to_string()))?;
                            out.push(internal, id, false, true);
                        }
                    }
                }
            }
        }
        None => out.extend_plain(initial_base()),
    }

    if let Some(suffix) = derivation.bundle.suffix() {
        let tok = suffix.vocab_token();
        let sid = require(vocab, &tok)?;
        out.push(tok, sid, true, false);
    }
    Ok(out)
}
