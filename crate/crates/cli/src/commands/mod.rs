pub mod baseline;
pub mod confuse;
pub mod dataset;
pub mod eval;
pub mod lexicon;
pub mod productivity;
pub mod projection;
pub mod segcompare;
pub mod tokenize;

use std::path::Path;

use anyhow::Result;
use derivkit::morpho::Lexicon;
use derivkit::resources::lines;

use crate::io::read_text;

pub fn load_lexicon(path: &Path) -> Result<Lexicon> {
    Ok(Lexicon::from_text(&read_text(path)?)?)
}

pub fn load_list(path: &Path) -> Result<Vec<String>> {
    Ok(lines(&read_text(path)?))
}

/// The fields of a gold file the evaluators need. Dataset items, cloze
/// records and well-formedness items all parse into it.
#[derive(Debug, Clone, serde::Deserialize)]
pub struct GoldRow {
    pub id: String,
    /// Cloze records carry the label directly.
    #[serde(default)]
    pub gold: Option<String>,
    #[serde(default)]
    pub prefix: Option<String>,
    #[serde(default)]
    pub suffix: Option<String>,
    #[serde(default)]
    pub shape: Option<derivkit::morpho::Shape>,
    #[serde(default)]
    pub split: Option<derivkit::dataset::Split>,
    #[serde(default)]
    pub bin: Option<derivkit::dataset::FrequencyBin>,
    /// Well-formedness label.
    #[serde(default)]
    pub label: Option<String>,
}

impl GoldRow {
    pub fn affix_label(&self) -> Result<String> {
        if let Some(g) = &self.gold {
            return Ok(g.clone());
        }
        match (&self.prefix, &self.suffix) {
            (Some(p), Some(s)) => Ok(format!("{p}##{s}")),
            (Some(a), None) | (None, Some(a)) => Ok(a.clone()),
            (None, None) => Err(crate::CliError::new(
                "invalid_input",
                format!("gold row `{}` has no label", self.id),
            )
            .into()),
        }
    }

    pub fn gold_label(&self) -> Result<derivkit::eval::GoldLabel> {
        Ok(derivkit::eval::GoldLabel {
            id: self.id.clone(),
            label: self.affix_label()?,
        })
    }
}

/// Row filters shared by the evaluators; an empty list keeps everything.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct GoldFilter {
    #[arg(long)]
    pub split: Option<derivkit::dataset::Split>,
    #[arg(long, value_delimiter = ',')]
    pub shape: Vec<derivkit::morpho::Shape>,
    #[arg(long, value_delimiter = ',')]
    pub bins: Vec<derivkit::dataset::FrequencyBin>,
}

impl GoldFilter {
    pub fn keeps(&self, row: &GoldRow) -> bool {
        let ok = |want: bool, have: bool| !want || have;
        ok(self.split.is_some(), row.split == self.split)
            && ok(
                !self.shape.is_empty(),
                row.shape.is_some_and(|s| self.shape.contains(&s)),
            )
            && ok(
                !self.bins.is_empty(),
                row.bin.is_some_and(|b| self.bins.contains(&b)),
            )
    }
}

pub fn load_golds(path: &Path, filter: &GoldFilter) -> Result<Vec<GoldRow>> {
    let (_, rows) = crate::io::read_jsonl::<GoldRow>(path)?;
    Ok(rows.into_iter().filter(|r| filter.keeps(r)).collect())
}
