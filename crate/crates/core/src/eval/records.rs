use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::dataset::{DatasetItem, WellFormednessLabel};
use crate::error::{Error, Result};

/// Ranked candidate labels for one item, best first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub ranking: Vec<(String, f64)>,
}

impl PredictionRecord {
    pub fn new(id: impl Into<String>, ranking: Vec<(String, f64)>) -> Self {
        PredictionRecord {
            id: id.into(),
            ranking,
        }
    }

    /// Labels must be unique and scores finite and non-increasing.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for (label, score) in &self.ranking {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "{}: duplicate label `{label}`",
                    self.id
                )));
            }
            if !score.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "{}: non-finite score for `{label}`",
                    self.id
                )));
            }
        }
        if self.ranking.windows(2).any(|w| w[1].1 > w[0].1) {
            return Err(Error::InvalidInput(format!(
                "{}: scores must be non-increasing",
                self.id
            )));
        }
        Ok(())
    }

    pub fn top(&self) -> Option<&str> {
        self.ranking.first().map(|(l, _)| l.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GoldLabel {
    pub id: String,
    pub label: String,
}

pub fn golds_from_items(items: &[DatasetItem]) -> Vec<GoldLabel> {
    items
        .iter()
        .map(|it| GoldLabel {
            id: it.id.clone(),
            label: it.label(),
        })
        .collect()
}

/// A binary well-formedness decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryPrediction {
    pub id: String,
    pub label: WellFormednessLabel,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_format() {
        let r = PredictionRecord::new("a", vec![("un".into(), 0.7), ("re".into(), 0.3)]);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"id":"a","ranking":[["un",0.7],["re",0.3]]}"#);
        let back: PredictionRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn validation() {
        assert!(
            PredictionRecord::new("a", vec![("un".into(), 0.7), ("re".into(), 0.3)])
                .validate()
                .is_ok()
        );
        assert!(
            PredictionRecord::new("a", vec![("un".into(), 0.3), ("re".into(), 0.7)])
                .validate()
                .is_err()
        );
        assert!(
            PredictionRecord::new("a", vec![("un".into(), 0.3), ("un".into(), 0.1)])
                .validate()
                .is_err()
        );
        assert!(PredictionRecord::new("a", vec![("un".into(), f64::NAN)])
            .validate()
            .is_err());
    }
}
