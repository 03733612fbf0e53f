use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use derivkit::confusion::{hapax_counts, ols_regression, RegressionResult};
use derivkit::dataset::DatasetItem;
use derivkit::eval::MrrReport;
use derivkit::morpho::Shape;
use serde::Serialize;

use crate::config::Config;
use crate::io::{check_paths, read_json, read_jsonl, write_json};

#[derive(Subcommand)]
pub enum Cmd {
    /// Regress per-affix MRR on the affix's hapax count.
    Regress {
        /// Dataset items; hapaxes are the distinct B1 derivatives per affix.
        #[arg(long)]
        dataset: PathBuf,
        /// `eval mrr --json` output.
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value = "P")]
        shape: Shape,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct Point {
    affix: String,
    hapaxes: usize,
    mrr: f64,
}

#[derive(Serialize)]
struct RegressOutput {
    shape: Shape,
    points: Vec<Point>,
    regression: RegressionResult,
}

pub fn run(cmd: Cmd, _cfg: &Config) -> Result<()> {
    match cmd {
        Cmd::Regress {
            dataset,
            report,
            shape,
            out,
        } => {
            check_paths(&[&dataset, &report], &[out.as_deref()])?;
            let (_, items) = read_jsonl::<DatasetItem>(&dataset)?;
            let report: MrrReport = read_json(&report)?;
            let hapaxes = hapax_counts(&items, shape);
            let points: Vec<Point> = report
                .per_affix
                .iter()
                .filter_map(|(a, m)| {
                    hapaxes.get(a).map(|&h| Point {
                        affix: a.clone(),
                        hapaxes: h,
                        mrr: m.mrr,
                    })
                })
                .collect();
            let skipped = report.per_affix.len() - points.len();
            if skipped > 0 {
                log::warn!("{skipped} affixes in the report do not occur with shape {shape} in the dataset");
            }
            let x: Vec<f64> = points.iter().map(|p| p.hapaxes as f64).collect();
            let y: Vec<f64> = points.iter().map(|p| p.mrr).collect();
            let regression = ols_regression(&x, &y)?;
            write_json(
                out.as_deref(),
                &RegressOutput {
                    shape,
                    points,
                    regression,
                },
            )
        }
    }
}
