//! JSON-lines files with an optional leading header record.
//!
//! The header is a single object `{"header": {...}}` on the first line; it
//! carries provenance such as the seed. Readers skip it transparently.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub command: String,
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

impl Header {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Header {
            tool: "derivkit".into(),
            command: command.into(),
            seed,
            extra: Default::default(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.extra.insert(
            key.to_string(),
            serde_json::to_value(value).expect("header values serialize"),
        );
        self
    }

    pub fn get_u64(&self, key: &str) -> Option<u64> {
        self.extra.get(key).and_then(serde_json::Value::as_u64)
    }
}

#[derive(Serialize, Deserialize)]
struct HeaderLine {
    header: Header,
}

pub fn write<W: Write, T: Serialize>(mut w: W, header: Option<&Header>, items: &[T]) -> Result<()> {
    let io = |e| Error::io("<output>", e);
    if let Some(h) = header {
        serde_json::to_writer(&mut w, &HeaderLine { header: h.clone() })
            .map_err(|source| Error::Json { line: 1, source })?;
        w.write_all(b"\n").map_err(io)?;
    }
    for (i, item) in items.iter().enumerate() {
        serde_json::to_writer(&mut w, item).map_err(|source| Error::Json {
            line: i + 1,
            source,
        })?;
        w.write_all(b"\n").map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn parse<R: BufRead, T: DeserializeOwned>(r: R) -> Result<(Option<Header>, Vec<T>)> {
    let mut header = None;
    let mut items = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<input>", e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if i == 0 && trimmed.starts_with("{\"header\"") {
            let h: HeaderLine =
                serde_json::from_str(trimmed).map_err(|source| Error::Json { line: 1, source })?;
            header = Some(h.header);
            continue;
        }
        items.push(serde_json::from_str(trimmed).map_err(|source| Error::Json {
            line: i + 1,
            source,
        })?);
    }
    Ok((header, items))
}

pub fn read<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<(Option<Header>, Vec<T>)> {
    let path = path.as_ref();
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse(std::io::BufReader::new(f)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        Error::Json { line, source } => {
            Error::Parse(format!("{}:{line}: {source}", path.display()))
        }
        other => other,
    })
}

pub fn write_file<T: Serialize>(
    path: impl AsRef<Path>,
    header: Option<&Header>,
    items: &[T],
) -> Result<()> {
    let path = path.as_ref();
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write(std::io::BufWriter::new(f), header, items).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}
