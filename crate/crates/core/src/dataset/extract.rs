use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ingest::Sentence;
use crate::error::Result;
use crate::morpho::{analyze, AffixBundle, AnalysisCaps, Derivation, Lexicon, Shape};

/// One derivative in one context sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    pub tokens: Vec<String>,
    pub d: usize,
    pub surface: String,
    pub base: String,
    pub prefix: Option<String>,
    pub suffix: Option<String>,
    pub shape: Shape,
}

impl Occurrence {
    pub fn new(tokens: Vec<String>, d: usize, derivation: &Derivation) -> Self {
        Occurrence {
            tokens,
            d,
            surface: derivation.surface.clone(),
            base: derivation.base.clone(),
            prefix: derivation.bundle.prefix().map(|a| a.form().to_string()),
            suffix: derivation.bundle.suffix().map(|a| a.form().to_string()),
            shape: derivation.shape(),
        }
    }

    pub fn bundle(&self) -> Result<AffixBundle> {
        AffixBundle::from_forms(self.prefix.as_deref(), self.suffix.as_deref())
    }

    pub fn label(&self) -> String {
        match (&self.prefix, &self.suffix) {
            (Some(p), Some(s)) => format!("{p}##{s}"),
            (Some(a), None) | (None, Some(a)) => a.clone(),
            (None, None) => String::new(),
        }
    }

    pub fn derivation(&self) -> Result<Derivation> {
        Ok(Derivation {
            surface: self.surface.clone(),
            base: self.base.clone(),
            bundle: self.bundle()?,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractReport {
    pub sentences: usize,
    pub with_derivatives: usize,
    /// Sentences dropped because some derivative occurs in them twice.
    pub repeated: usize,
    pub occurrences: usize,
}

fn sentence_occurrences(
    s: &Sentence,
    lexicon: &Lexicon,
    caps: AnalysisCaps,
) -> (Vec<Occurrence>, bool) {
    let found: Vec<(usize, Derivation)> = s
        .tokens
        .iter()
        .enumerate()
        .filter_map(|(i, t)| analyze(t, lexicon, caps).map(|d| (i, d)))
        .collect();
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for (_, d) in &found {
        *counts.entry(d.surface.as_str()).or_default() += 1;
    }
    if counts.values().any(|&c| c > 1) {
        return (Vec::new(), true);
    }
    let occs = found
        .iter()
        .map(|(i, d)| Occurrence::new(s.tokens.clone(), *i, d))
        .collect();
    (occs, false)
}

/// One occurrence per (sentence, derivative). A sentence in which any
/// derivative appears more than once is dropped entirely. Output order
/// follows the input.
pub fn extract(
    sentences: &[Sentence],
    lexicon: &Lexicon,
    caps: AnalysisCaps,
) -> (Vec<Occurrence>, ExtractReport) {
    let per_sentence: Vec<_> = sentences
        .par_iter()
        .map(|s| sentence_occurrences(s, lexicon, caps))
        .collect();
    let mut report = ExtractReport {
        sentences: sentences.len(),
        ..Default::default()
    };
    let mut out = Vec::new();
    for (occs, repeated) in per_sentence {
        if repeated {
            report.repeated += 1;
        } else if !occs.is_empty() {
            report.with_derivatives += 1;
        }
        out.extend(occs);
    }
    report.occurrences = out.len();
    (out, report)
}
