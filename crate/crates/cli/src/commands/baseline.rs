use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::Subcommand;
use derivkit::baselines::{
    predict_softmax, random_baseline, train_softmax, FeatureSpec, LabelSpace, SoftmaxHyper,
    SoftmaxModel,
};
use derivkit::dataset::{ClozeRecord, DatasetItem, Split};
use derivkit::jsonl::Header;
use derivkit::morpho::Shape;

use super::load_lexicon;
use crate::config::Config;
use crate::io::{check_paths, read_jsonl, require_seed, write_json, write_jsonl};

#[derive(Subcommand)]
pub enum Cmd {
    /// Uniformly random rankings over each item's eligible labels.
    Random {
        /// Cloze records to score.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        /// Dataset whose train split supplies the PS labels.
        #[arg(long)]
        dataset: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train the hashed-feature softmax on whole-word cloze records.
    Train {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        /// Dataset whose train split adds PS labels.
        #[arg(long)]
        dataset: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        buckets: Option<u32>,
        #[arg(long)]
        lr: Option<f64>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        l2: Option<f64>,
        #[arg(long)]
        batch_size: Option<usize>,
        /// Model file (JSON).
        #[arg(long)]
        out: PathBuf,
        /// Training loss and accuracy per shape as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Rank labels for cloze records with a trained model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Lexicon prefixes and suffixes, PS bundles from the dataset's train split
/// and from `extra_ps`.
fn label_space(
    lexicon: &Path,
    dataset: Option<&Path>,
    extra_ps: &[&ClozeRecord],
) -> Result<LabelSpace> {
    let lex = load_lexicon(lexicon)?;
    let train: Vec<DatasetItem> = match dataset {
        Some(p) => read_jsonl::<DatasetItem>(p)?
            .1
            .into_iter()
            .filter(|it| it.split == Split::Train)
            .collect(),
        None => Vec::new(),
    };
    let base = LabelSpace::from_lexicon(&lex, &train)?;
    let mut shapes: BTreeMap<Shape, Vec<String>> =
        base.iter().map(|(s, l)| (s, l.to_vec())).collect();
    shapes
        .entry(Shape::PS)
        .or_default()
        .extend(extra_ps.iter().map(|r| r.gold.clone()));
    Ok(LabelSpace::new(shapes)?)
}

pub fn run(cmd: Cmd, cfg: &Config) -> Result<()> {
    match cmd {
        Cmd::Random {
            input,
            lexicon,
            dataset,
            seed,
            out,
        } => {
            let mut inputs = vec![input.as_path(), lexicon.as_path()];
            inputs.extend(dataset.as_deref());
            check_paths(&inputs, &[out.as_deref()])?;
            let seed = require_seed(cfg.pick(seed, "seed")?)?;
            let labels = label_space(&lexicon, dataset.as_deref(), &[])?;
            let (_, records) = read_jsonl::<ClozeRecord>(&input)?;
            let preds = random_baseline(&records, &labels, seed)?;
            write_jsonl(
                out.as_deref(),
                &Header::new("baseline random", Some(seed)),
                &preds,
            )
        }
        Cmd::Train {
            input,
            lexicon,
            dataset,
            seed,
            window,
            buckets,
            lr,
            epochs,
            l2,
            batch_size,
            out,
            report,
        } => {
            let mut inputs = vec![input.as_path(), lexicon.as_path()];
            inputs.extend(dataset.as_deref());
            check_paths(&inputs, &[Some(&out), report.as_deref()])?;
            let seed = require_seed(cfg.pick(seed, "seed")?)?;
            let (_, records) = read_jsonl::<ClozeRecord>(&input)?;
            let ps: Vec<&ClozeRecord> = records.iter().filter(|r| r.shape == Shape::PS).collect();
            let labels = label_space(&lexicon, dataset.as_deref(), &ps)?;
            let ds = FeatureSpec::default();
            let spec = FeatureSpec {
                window: cfg.pick_or(window, "window", ds.window)?,
                buckets: cfg.pick_or(buckets, "buckets", ds.buckets)?,
                ..ds
            };
            let dh = SoftmaxHyper::default();
            let hyper = SoftmaxHyper {
                lr: cfg.pick_or(lr, "lr", dh.lr)?,
                epochs: cfg.pick_or(epochs, "epochs", dh.epochs)?,
                l2: cfg.pick_or(l2, "l2", dh.l2)?,
                batch_size: cfg.pick_or(batch_size, "batch-size", dh.batch_size)?,
                seed,
            };
            let (model, rep) = train_softmax(&records, &labels, spec, &hyper)?;
            log::info!("final loss {:.6}", rep.final_loss);
            model.save(&out)?;
            if let Some(r) = report {
                write_json(Some(&r), &rep)?;
            }
            Ok(())
        }
        Cmd::Predict { model, input, out } => {
            check_paths(&[&model, &input], &[out.as_deref()])?;
            let model = SoftmaxModel::load(&model)?;
            let (_, records) = read_jsonl::<ClozeRecord>(&input)?;
            let preds = predict_softmax(&model, &records)?;
            write_jsonl(
                out.as_deref(),
                &Header::new("baseline predict", Some(model.hyper.seed)),
                &preds,
            )
        }
    }
}
