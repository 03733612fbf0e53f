use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::BufRead;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type LanguageFilter = Arc<dyn Fn(&str) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct FilterConfig {
    pub min_words: usize,
    pub max_words: usize,
    pub bots: HashSet<String>,
    /// Sentences for which this returns false are dropped. `None` keeps all.
    pub language: Option<LanguageFilter>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            min_words: 10,
            max_words: 100,
            bots: HashSet::new(),
            language: None,
        }
    }
}

impl fmt::Debug for FilterConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FilterConfig")
            .field("min_words", &self.min_words)
            .field("max_words", &self.max_words)
            .field("bots", &self.bots.len())
            .field("language", &self.language.is_some())
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    Malformed,
    Bot,
    Language,
    Hyperlink,
    UserReference,
    Number,
    TooShort,
    TooLong,
}

/// One pre-split sentence, tokenized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub tokens: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub read: usize,
    pub emitted: usize,
    pub dropped: BTreeMap<DropReason, usize>,
    /// Tokens across emitted sentences; the normalizer for per-billion
    /// frequencies.
    pub corpus_tokens: u64,
}

impl IngestReport {
    fn merge(&mut self, other: IngestReport) {
        self.read += other.read;
        self.emitted += other.emitted;
        self.corpus_tokens += other.corpus_tokens;
        for (k, v) in other.dropped {
            *self.dropped.entry(k).or_default() += v;
        }
    }
}

#[derive(Debug, Default)]
pub struct IngestOutput {
    pub sentences: Vec<Sentence>,
    pub report: IngestReport,
    pub errors: Vec<(PathBuf, Error)>,
}

#[derive(Deserialize)]
struct Record {
    #[serde(alias = "body")]
    text: String,
    #[serde(default)]
    author: Option<String>,
}

fn is_hyperlink(chunk: &str) -> bool {
    let c = chunk.to_ascii_lowercase();
    c.contains("://") || c.starts_with("www.") || c.contains("http:") || c.contains("https:")
}

fn is_user_reference(chunk: &str) -> bool {
    let c = chunk.trim_start_matches(|ch: char| !ch.is_alphanumeric() && ch != '@' && ch != '/');
    c.starts_with('@') || c.starts_with("u/") || c.starts_with("/u/")
}

/// Whitespace tokenization with leading and trailing punctuation split off
/// into separate tokens. Word-internal hyphens and apostrophes stay.
pub fn tokenize_sentence(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let start = chars
            .iter()
            .position(|c| c.is_alphanumeric())
            .unwrap_or(chars.len());
        let end = chars
            .iter()
            .rposition(|c| c.is_alphanumeric())
            .map_or(start, |i| i + 1)
            .max(start);
        out.extend(chars[..start].iter().map(|c| c.to_string()));
        if start < end {
            out.push(chars[start..end].iter().collect());
        }
        out.extend(chars[end..].iter().map(|c| c.to_string()));
    }
    out
}

fn check(
    text: &str,
    author: Option<&str>,
    cfg: &FilterConfig,
) -> std::result::Result<Vec<String>, DropReason> {
    if author.is_some_and(|a| cfg.bots.contains(a)) {
        return Err(DropReason::Bot);
    }
    if let Some(lang) = &cfg.language {
        if !lang(text) {
            return Err(DropReason::Language);
        }
    }
    for chunk in text.split_whitespace() {
        if is_hyperlink(chunk) {
            return Err(DropReason::Hyperlink);
        }
        if is_user_reference(chunk) {
            return Err(DropReason::UserReference);
        }
        if chunk.chars().any(|c| c.is_ascii_digit()) {
            return Err(DropReason::Number);
        }
    }
    let tokens = tokenize_sentence(text);
    if tokens.len() < cfg.min_words {
        return Err(DropReason::TooShort);
    }
    if tokens.len() > cfg.max_words {
        return Err(DropReason::TooLong);
    }
    Ok(tokens)
}

/// Filters one newline-delimited source. Lines starting with `{` are JSON
/// records with a `text` (or `body`) field and an optional `author`; other
/// lines are plain sentences.
pub fn ingest_reader<R: BufRead>(
    reader: R,
    cfg: &FilterConfig,
    mut emit: impl FnMut(Sentence),
) -> Result<IngestReport> {
    let mut report = IngestReport::default();
    for line in reader.lines() {
        let line = line.map_err(|e| Error::io("<corpus>", e))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        report.read += 1;
        let outcome = if line.starts_with('{') {
            match serde_json::from_str::<Record>(line) {
                Ok(r) => check(&r.text, r.author.as_deref(), cfg),
                Err(_) => Err(DropReason::Malformed),
            }
        } else {
            check(line, None, cfg)
        };
        match outcome {
            Ok(tokens) => {
                report.emitted += 1;
                report.corpus_tokens += tokens.len() as u64;
                emit(Sentence { tokens });
            }
            Err(reason) => *report.dropped.entry(reason).or_default() += 1,
        }
    }
    Ok(report)
}

fn ingest_file(path: &Path, cfg: &FilterConfig) -> Result<(Vec<Sentence>, IngestReport)> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut sentences = Vec::new();
    let report = ingest_reader(std::io::BufReader::new(f), cfg, |s| sentences.push(s)).map_err(
        |e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        },
    )?;
    Ok((sentences, report))
}

/// Ingests files in parallel. Output order follows `paths`; a file that fails
/// is reported in `errors` and the others still contribute.
pub fn ingest_paths(paths: &[PathBuf], cfg: &FilterConfig) -> IngestOutput {
    let results: Vec<_> = paths.par_iter().map(|p| (p, ingest_file(p, cfg))).collect();
    let mut out = IngestOutput::default();
    for (path, res) in results {
        match res {
            Ok((sentences, report)) => {
                out.sentences.extend(sentences);
                out.report.merge(report);
            }
            Err(e) => out.errors.push((path.clone(), e)),
        }
    }
    out
}
