//! File helpers shared by the subcommands.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use derivkit::jsonl::{self, Header};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::CliError;

/// Fails before any work starts if an input is missing or an output
/// directory does not exist.
pub fn check_paths(inputs: &[&Path], outputs: &[Option<&Path>]) -> Result<()> {
    for p in inputs {
        if !p.exists() {
            return Err(
                CliError::new("missing_input", format!("{} does not exist", p.display())).into(),
            );
        }
    }
    for p in outputs.iter().flatten() {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            if !dir.is_dir() {
                return Err(CliError::new(
                    "missing_output_dir",
                    format!("{} does not exist", dir.display()),
                )
                .into());
            }
        }
    }
    Ok(())
}

pub fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

pub fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    let mut w = writer(path)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

pub fn write_jsonl<T: Serialize>(path: Option<&Path>, header: &Header, items: &[T]) -> Result<()> {
    let mut w = writer(path)?;
    jsonl::write(&mut w, Some(header), items)?;
    w.flush()?;
    Ok(())
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<(Option<Header>, Vec<T>)> {
    jsonl::read(path).with_context(|| format!("reading {}", path.display()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Corpus files: explicit paths, else every file in `dir` sorted by name.
pub fn corpus_files(explicit: &[PathBuf], dir: Option<&Path>) -> Result<Vec<PathBuf>> {
    if !explicit.is_empty() {
        return Ok(explicit.to_vec());
    }
    let Some(dir) = dir else {
        return Err(CliError::new(
            "missing_input",
            "no corpus given: pass --corpus or --corpus-dir (or set DERIVKIT_CORPUS_DIR)",
        )
        .into());
    };
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    Ok(files)
}

pub fn require_seed(seed: Option<u64>) -> Result<u64> {
    seed.ok_or_else(|| {
        CliError::new("missing_seed", "this stage is randomized and needs --seed").into()
    })
}
