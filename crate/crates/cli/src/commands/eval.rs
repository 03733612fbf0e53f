use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use derivkit::dataset::WellFormednessLabel;
use derivkit::eval::{
    accuracy, mrr, wellformedness_accuracy, BinaryPrediction, GoldLabel, PredictionRecord,
};

use super::{load_golds, GoldFilter};
use crate::config::Config;
use crate::io::{check_paths, read_jsonl, write_json, write_text};
use crate::CliError;

#[derive(Subcommand)]
pub enum Cmd {
    /// Per-affix and macro MRR (rank cutoff 10).
    Mrr {
        #[arg(long)]
        predictions: PathBuf,
        /// Dataset items or cloze records.
        #[arg(long)]
        gold: PathBuf,
        #[command(flatten)]
        filter: GoldFilter,
        /// JSON instead of TSV.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Top-1 accuracy, or binary accuracy with --wellformed.
    Accuracy {
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long)]
        gold: PathBuf,
        #[command(flatten)]
        filter: GoldFilter,
        /// Predictions are `{id, label}` decisions against well-formedness items.
        #[arg(long)]
        wellformed: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cmd: Cmd, _cfg: &Config) -> Result<()> {
    match cmd {
        Cmd::Mrr {
            predictions,
            gold,
            filter,
            json,
            out,
        } => {
            check_paths(&[&predictions, &gold], &[out.as_deref()])?;
            let golds: Vec<GoldLabel> = load_golds(&gold, &filter)?
                .iter()
                .map(|r| r.gold_label())
                .collect::<Result<_>>()?;
            let (_, records) = read_jsonl::<PredictionRecord>(&predictions)?;
            let report = mrr(&records, &golds)?;
            if json {
                write_json(out.as_deref(), &report)
            } else {
                write_text(out.as_deref(), &report.to_tsv())
            }
        }
        Cmd::Accuracy {
            predictions,
            gold,
            filter,
            wellformed,
            out,
        } => {
            check_paths(&[&predictions, &gold], &[out.as_deref()])?;
            let rows = load_golds(&gold, &filter)?;
            let acc = if wellformed {
                let golds = rows
                    .iter()
                    .map(|r| {
                        let label = match r.label.as_deref() {
                            Some("positive") => WellFormednessLabel::Positive,
                            Some("negative") => WellFormednessLabel::Negative,
                            _ => {
                                return Err(CliError::new(
                                    "invalid_input",
                                    format!("gold row `{}` has no well-formedness label", r.id),
                                )
                                .into())
                            }
                        };
                        Ok((r.id.clone(), label))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let (_, preds) = read_jsonl::<BinaryPrediction>(&predictions)?;
                wellformedness_accuracy(&preds, &golds)?
            } else {
                let golds: Vec<GoldLabel> =
                    rows.iter().map(|r| r.gold_label()).collect::<Result<_>>()?;
                let (_, records) = read_jsonl::<PredictionRecord>(&predictions)?;
                accuracy(&records, &golds)?
            };
            write_json(
                out.as_deref(),
                &serde_json::json!({ "accuracy": acc, "items": rows.len() }),
            )
        }
    }
}
