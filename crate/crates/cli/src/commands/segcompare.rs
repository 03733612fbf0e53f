use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use derivkit::dataset::FrequencyBin;
use derivkit::eval::{mrr, GoldLabel, PredictionRecord};
use derivkit::morpho::Shape;
use derivkit::tokenizer::SegmentationMethod;

use super::{load_golds, GoldFilter};
use crate::config::Config;
use crate::io::{check_paths, read_jsonl, write_text};
use crate::CliError;

#[derive(clap::Args)]
pub struct Args {
    /// Dataset items (they carry the frequency bin).
    #[arg(long)]
    gold: PathBuf,
    /// `METHOD=predictions.jsonl`, repeated per method.
    #[arg(long = "pred", required = true)]
    preds: Vec<String>,
    #[arg(long)]
    split: Option<derivkit::dataset::Split>,
    #[arg(long, default_value = "P")]
    shape: Shape,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// One row per method: macro MRR in each bin, then over all bins. Bins
/// without gold items are `NA`.
pub fn run(args: Args, _cfg: &Config) -> Result<()> {
    let mut runs = Vec::new();
    for p in &args.preds {
        let (m, path) = p.split_once('=').ok_or_else(|| {
            CliError::new("usage", format!("--pred expects METHOD=FILE, got `{p}`"))
        })?;
        runs.push((m.parse::<SegmentationMethod>()?, PathBuf::from(path)));
    }
    let mut inputs = vec![args.gold.as_path()];
    inputs.extend(runs.iter().map(|(_, p)| p.as_path()));
    check_paths(&inputs, &[args.out.as_deref()])?;
    let filter = GoldFilter {
        split: args.split,
        shape: vec![args.shape],
        bins: Vec::new(),
    };
    let rows = load_golds(&args.gold, &filter)?;
    let mut by_bin: Vec<Vec<GoldLabel>> = vec![Vec::new(); FrequencyBin::ALL.len()];
    let mut all = Vec::with_capacity(rows.len());
    for r in &rows {
        let g = r.gold_label()?;
        let bin = r.bin.ok_or_else(|| {
            CliError::new(
                "invalid_input",
                format!("gold row `{}` has no frequency bin", r.id),
            )
        })?;
        by_bin[bin as usize].push(g.clone());
        all.push(g);
    }

    let mut out = String::from("method");
    for b in FrequencyBin::ALL {
        let _ = write!(out, "\t{b}");
    }
    out.push_str("\tall\n");
    for (method, path) in runs {
        let (_, records) = read_jsonl::<PredictionRecord>(&path)?;
        out.push_str(method.as_str());
        for golds in by_bin.iter().chain(std::iter::once(&all)) {
            if golds.is_empty() {
                out.push_str("\tNA");
            } else {
                let _ = write!(out, "\t{:.6}", mrr(&records, golds)?.macro_mrr);
            }
        }
        out.push('\n');
    }
    write_text(args.out.as_deref(), &out)
}
