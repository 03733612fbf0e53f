use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

pub const DEFAULT_UNK: &str = "[UNK]";

/// Token ↔ id mapping in the `vocab.txt` convention: one token per line, the
/// line index is the id.
#[derive(Debug, Clone)]
pub struct Vocab {
    tokens: Vec<String>,
    ids: HashMap<String, u32>,
    unk: String,
}

impl Vocab {
    pub fn new(tokens: Vec<String>, unk: &str) -> Result<Self> {
        let mut ids = HashMap::with_capacity(tokens.len());
        for (i, t) in tokens.iter().enumerate() {
            if ids.insert(t.clone(), i as u32).is_some() {
                return Err(Error::MalformedVocab(format!("duplicate token `{t}`")));
            }
        }
        if !ids.contains_key(unk) {
            return Err(Error::MalformedVocab(format!(
                "unknown token `{unk}` missing"
            )));
        }
        if !tokens.iter().any(|t| t.len() > 2 && t.starts_with("##")) {
            return Err(Error::MalformedVocab("no word-internal (##) tokens".into()));
        }
        Ok(Vocab {
            tokens,
            ids,
            unk: unk.to_string(),
        })
    }

    pub fn from_text(text: &str, unk: &str) -> Result<Self> {
        Self::new(
            text.lines()
                .map(|l| l.trim_end_matches('\r').to_string())
                .collect(),
            unk,
        )
    }

    pub fn load(path: impl AsRef<Path>, unk: &str) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text, unk)
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.ids.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.ids.contains_key(token)
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn unk(&self) -> &str {
        &self.unk
    }

    pub fn unk_id(&self) -> u32 {
        self.ids[&self.unk]
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}
