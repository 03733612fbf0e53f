use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{GoldLabel, PredictionRecord};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub labels: Vec<String>,
    /// `counts[i][j]`: items with gold `labels[i]` predicted as `labels[j]`.
    pub counts: Vec<Vec<u64>>,
    /// Row-normalized counts; rows without support are all zero.
    pub values: Vec<Vec<f64>>,
}

impl ConfusionMatrix {
    pub fn from_counts(labels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        let n = labels.len();
        if counts.len() != n || counts.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: counts.len(),
            });
        }
        let values = counts
            .iter()
            .map(|row| {
                let total: u64 = row.iter().sum();
                row.iter()
                    .map(|&c| {
                        if total == 0 {
                            0.0
                        } else {
                            c as f64 / total as f64
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(ConfusionMatrix {
            labels,
            counts,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Rows are gold labels, columns predictions.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("gold");
        for l in &self.labels {
            let _ = write!(out, "\t{l}");
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.values) {
            out.push_str(l);
            for v in row {
                let _ = write!(out, "\t{v}");
            }
            out.push('\n');
        }
        out
    }
}

/// Counts (gold, rank-1 prediction) pairs over `golds` and row-normalizes.
pub fn confusion_matrix(
    records: &[PredictionRecord],
    golds: &[GoldLabel],
    labels: &[String],
) -> Result<ConfusionMatrix> {
    let index: HashMap<&str, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    if index.len() != labels.len() {
        return Err(Error::InvalidInput("duplicate labels".into()));
    }
    let by_id: HashMap<&str, &PredictionRecord> =
        records.iter().map(|r| (r.id.as_str(), r)).collect();
    let missing: Vec<String> = golds
        .iter()
        .filter(|g| !by_id.contains_key(g.id.as_str()))
        .map(|g| g.id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingRecords(missing));
    }
    let lookup = |l: &str| {
        index
            .get(l)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(l.to_string()))
    };
    let n = labels.len();
    let mut counts = vec![vec![0u64; n]; n];
    for g in golds {
        let rec = by_id[g.id.as_str()];
        let top = rec
            .top()
            .ok_or_else(|| Error::InvalidInput(format!("{}: empty ranking", rec.id)))?;
        counts[lookup(&g.label)?][lookup(top)?] += 1;
    }
    ConfusionMatrix::from_counts(labels.to_vec(), counts)
}
