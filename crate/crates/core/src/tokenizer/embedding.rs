use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Token embeddings read from the word2vec-style text format: a header line
/// `n m`, then `token v1 ... vm` per line.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new(dim: usize, vectors: BTreeMap<String, Vec<f64>>) -> Result<Self> {
        if let Some((tok, v)) = vectors.iter().find(|(_, v)| v.len() != dim) {
            return Err(Error::InvalidInput(format!(
                "embedding for `{tok}` has dimension {}, expected {dim}",
                v.len()
            )));
        }
        Ok(EmbeddingTable { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.vectors.get(token).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.vectors.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("empty embedding file".into()))?;
        let mut head = header.split_whitespace().map(str::parse::<usize>);
        let (n, m) = match (head.next(), head.next(), head.next()) {
            (Some(Ok(n)), Some(Ok(m)), None) => (n, m),
            _ => return Err(Error::Parse(format!("bad embedding header `{header}`"))),
        };
        let mut vectors = BTreeMap::new();
        for (i, line) in lines {
            let mut fields = line.split_whitespace();
            let tok = fields.next().expect("non-empty line");
            let v = fields
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("line {}: bad number `{f}`", i + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            if v.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: v.len(),
                });
            }
            vectors.insert(tok.to_string(), v);
        }
        if vectors.len() != n {
            return Err(Error::Parse(format!(
                "header announces {n} vectors, found {}",
                vectors.len()
            )));
        }
        Self::new(m, vectors)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.vectors.len(), self.dim);
        for (tok, v) in &self.vectors {
            out.push_str(tok);
            for x in v {
                let _ = write!(out, " {x}");
            }
            out.push('\n');
        }
        out
    }
}
