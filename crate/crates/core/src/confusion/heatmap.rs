use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::graph::Clustering;
use super::matrix::ConfusionMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapExport {
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl HeatmapExport {
    /// Header row and first column carry the ordered labels.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
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

/// Groups labels by final cluster: larger clusters first, equal sizes by
/// their earliest label in matrix order, members in matrix order. Singletons
/// therefore come last. Labels absent from the clustering follow as singletons.
pub fn order_for_heatmap(clustering: &Clustering, c: &ConfusionMatrix) -> Result<HeatmapExport> {
    let index: HashMap<&str, usize> = c
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let mut seen = vec![false; c.len()];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for block in clustering.final_partition() {
        let mut members = Vec::with_capacity(block.len());
        for l in block {
            let &i = index
                .get(l.as_str())
                .ok_or_else(|| Error::UnknownLabel(l.clone()))?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidInput(format!(
                    "label `{l}` appears in two clusters"
                )));
            }
            members.push(i);
        }
        members.sort_unstable();
        if !members.is_empty() {
            blocks.push(members);
        }
    }
    blocks.extend((0..c.len()).filter(|&i| !seen[i]).map(|i| vec![i]));
    blocks.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let order: Vec<usize> = blocks.concat();
    Ok(HeatmapExport {
        labels: order.iter().map(|&i| c.labels[i].clone()).collect(),
        values: order
            .iter()
            .map(|&i| order.iter().map(|&j| c.values[i][j]).collect())
            .collect(),
    })
}
