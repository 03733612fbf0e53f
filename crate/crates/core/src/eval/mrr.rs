use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::records::{BinaryPrediction, GoldLabel, PredictionRecord};
use crate::dataset::WellFormednessLabel;
use crate::error::{Error, Result};

/// Reciprocal ranks beyond this are counted as zero.
pub const RANK_CUTOFF: usize = 10;

/// 1-based rank of `gold`, `None` if absent. When other labels share the
/// gold's score the gold takes the worst position of that tie group.
pub fn rank_of_gold(record: &PredictionRecord, gold: &str) -> Option<usize> {
    let pos = record.ranking.iter().position(|(l, _)| l == gold)?;
    let score = record.ranking[pos].1;
    let last_tied = record.ranking[pos..]
        .iter()
        .take_while(|(_, s)| *s == score)
        .count()
        + pos;
    Some(last_tied)
}

pub fn reciprocal_rank(rank: Option<usize>) -> f64 {
    match rank {
        Some(r) if (1..=RANK_CUTOFF).contains(&r) => 1.0 / r as f64,
        _ => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffixMrr {
    pub support: usize,
    pub mrr: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MrrReport {
    pub per_affix: BTreeMap<String, AffixMrr>,
    pub macro_mrr: f64,
    /// Micro-averaged rank-1 accuracy.
    pub accuracy: f64,
    pub items: usize,
}

impl MrrReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("affix\tsupport\tmrr\taccuracy\n");
        for (a, m) in &self.per_affix {
            let _ = writeln!(out, "{a}\t{}\t{:.6}\t{:.6}", m.support, m.mrr, m.accuracy);
        }
        let _ = writeln!(
            out,
            "MACRO\t{}\t{:.6}\t{:.6}",
            self.items, self.macro_mrr, self.accuracy
        );
        out
    }
}

fn index_records(records: &[PredictionRecord]) -> Result<HashMap<&str, &PredictionRecord>> {
    let mut map = HashMap::with_capacity(records.len());
    for r in records {
        if map.insert(r.id.as_str(), r).is_some() {
            return Err(Error::InvalidInput(format!(
                "duplicate prediction record `{}`",
                r.id
            )));
        }
    }
    Ok(map)
}

fn gold_ranks(records: &[PredictionRecord], golds: &[GoldLabel]) -> Result<Vec<Option<usize>>> {
    let by_id = index_records(records)?;
    let missing: Vec<String> = golds
        .iter()
        .filter(|g| !by_id.contains_key(g.id.as_str()))
        .map(|g| g.id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingRecords(missing));
    }
    Ok(golds
        .par_iter()
        .map(|g| rank_of_gold(by_id[g.id.as_str()], &g.label))
        .collect())
}

/// Per-affix MRR with the rank cutoff, macro-averaged over affixes occurring
/// in `golds`. Every gold item needs a record; extra records are ignored.
pub fn mrr(records: &[PredictionRecord], golds: &[GoldLabel]) -> Result<MrrReport> {
    let ranks = gold_ranks(records, golds)?;
    let mut sums: BTreeMap<&str, (usize, f64, usize)> = BTreeMap::new();
    for (g, r) in golds.iter().zip(&ranks) {
        let e = sums.entry(g.label.as_str()).or_default();
        e.0 += 1;
        e.1 += reciprocal_rank(*r);
        e.2 += (*r == Some(1)) as usize;
    }
    let per_affix: BTreeMap<String, AffixMrr> = sums
        .into_iter()
        .map(|(a, (n, rr, hits))| {
            (
                a.to_string(),
                AffixMrr {
                    support: n,
                    mrr: rr / n as f64,
                    accuracy: hits as f64 / n as f64,
                },
            )
        })
        .collect();
    let macro_mrr = if per_affix.is_empty() {
        0.0
    } else {
        per_affix.values().map(|m| m.mrr).sum::<f64>() / per_affix.len() as f64
    };
    let hits = ranks.iter().filter(|r| **r == Some(1)).count();
    Ok(MrrReport {
        per_affix,
        macro_mrr,
        accuracy: if golds.is_empty() {
            0.0
        } else {
            hits as f64 / golds.len() as f64
        },
        items: golds.len(),
    })
}

/// Fraction of items whose gold label is ranked first.
pub fn accuracy(records: &[PredictionRecord], golds: &[GoldLabel]) -> Result<f64> {
    let ranks = gold_ranks(records, golds)?;
    if ranks.is_empty() {
        return Ok(0.0);
    }
    Ok(ranks.iter().filter(|r| **r == Some(1)).count() as f64 / ranks.len() as f64)
}

pub fn wellformedness_accuracy(
    predictions: &[BinaryPrediction],
    golds: &[(String, WellFormednessLabel)],
) -> Result<f64> {
    let by_id: HashMap<&str, WellFormednessLabel> = predictions
        .iter()
        .map(|p| (p.id.as_str(), p.label))
        .collect();
    let missing: Vec<String> = golds
        .iter()
        .filter(|(id, _)| !by_id.contains_key(id.as_str()))
        .map(|(id, _)| id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingRecords(missing));
    }
    if golds.is_empty() {
        return Ok(0.0);
    }
    let correct = golds
        .iter()
        .filter(|(id, l)| by_id[id.as_str()] == *l)
        .count();
    Ok(correct as f64 / golds.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, labels: &[&str]) -> PredictionRecord {
        let n = labels.len();
        PredictionRecord::new(
            id,
            labels
                .iter()
                .enumerate()
                .map(|(i, l)| (l.to_string(), (n - i) as f64))
                .collect(),
        )
    }

    fn gold(id: &str, label: &str) -> GoldLabel {
        GoldLabel {
            id: id.into(),
            label: label.into(),
        }
    }

    #[test]
    fn rank_examples() {
        let r = rec(
            "a",
            &["u", "v", "w", "x", "y", "z", "p", "q", "r", "s", "t"],
        );
        assert_eq!(rank_of_gold(&r, "u"), Some(1));
        assert_eq!(rank_of_gold(&r, "t"), Some(11));
        assert_eq!(reciprocal_rank(Some(11)), 0.0);
        assert_eq!(reciprocal_rank(Some(10)), 0.1);
        assert_eq!(rank_of_gold(&r, "missing"), None);
        assert_eq!(reciprocal_rank(None), 0.0);
    }

    #[test]
    fn ties_are_pessimistic() {
        let r = PredictionRecord::new(
            "a",
            vec![
                ("x".into(), 0.5),
                ("g".into(), 0.2),
                ("y".into(), 0.2),
                ("z".into(), 0.2),
                ("w".into(), 0.1),
            ],
        );
        assert_eq!(rank_of_gold(&r, "g"), Some(4));
        assert_eq!(rank_of_gold(&r, "z"), Some(4));
        assert_eq!(rank_of_gold(&r, "x"), Some(1));
    }

    #[test]
    fn hand_fixture_macro() {
        let records = vec![
            rec("1", &["u", "v"]),
            rec("2", &["u", "v"]),
            rec("3", &["u", "v"]),
        ];
        let golds = vec![gold("1", "u"), gold("2", "u"), gold("3", "v")];
        let rep = mrr(&records, &golds).unwrap();
        assert_eq!(rep.per_affix["u"].mrr, 1.0);
        assert_eq!(rep.per_affix["v"].mrr, 0.5);
        assert_eq!(rep.macro_mrr, 0.75);
        assert!((rep.accuracy - 2.0 / 3.0).abs() < 1e-12);
        let tsv = rep.to_tsv();
        assert!(tsv.ends_with("MACRO\t3\t0.750000\t0.666667\n"));
    }

    #[test]
    fn all_beyond_cutoff() {
        let labels: Vec<String> = (0..12).map(|i| format!("l{i:02}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let records = vec![rec("1", &refs)];
        let rep = mrr(&records, &[gold("1", "l11")]).unwrap();
        assert_eq!(rep.macro_mrr, 0.0);
    }

    #[test]
    fn missing_records_listed() {
        let err = mrr(&[rec("1", &["u"])], &[gold("1", "u"), gold("2", "u")]).unwrap_err();
        match err {
            Error::MissingRecords(ids) => assert_eq!(ids, vec!["2".to_string()]),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn duplicate_records_rejected() {
        assert!(mrr(&[rec("1", &["u"]), rec("1", &["u"])], &[gold("1", "u")]).is_err());
    }

    #[test]
    fn accuracy_perfect() {
        let records = vec![rec("1", &["u", "v"]), rec("2", &["v", "u"])];
        assert_eq!(
            accuracy(&records, &[gold("1", "u"), gold("2", "v")]).unwrap(),
            1.0
        );
    }

    #[test]
    fn wellformedness() {
        use WellFormednessLabel::*;
        let golds: Vec<(String, WellFormednessLabel)> = vec![
            ("a".into(), Positive),
            ("b".into(), Negative),
            ("c".into(), Positive),
            ("d".into(), Negative),
        ];
        let all_pos: Vec<_> = golds
            .iter()
            .map(|(id, _)| BinaryPrediction {
                id: id.clone(),
                label: Positive,
            })
            .collect();
        assert_eq!(wellformedness_accuracy(&all_pos, &golds).unwrap(), 0.5);
        let perfect: Vec<_> = golds
            .iter()
            .map(|(id, l)| BinaryPrediction {
                id: id.clone(),
                label: *l,
            })
            .collect();
        assert_eq!(wellformedness_accuracy(&perfect, &golds).unwrap(), 1.0);
        assert!(wellformedness_accuracy(&perfect[..1], &golds).is_err());
    }
}
