use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::Subcommand;
use derivkit::dataset::{
    bin_occurrences, build_wellformedness, extract, ingest_paths, mask, split, BinStats,
    BinnedOccurrence, ClozeRecord, DatasetItem, FilterConfig, FrequencyBin, MaskMode, Occurrence,
    Setting, Split, SplitRatios,
};
use derivkit::jsonl::Header;
use derivkit::morpho::{AnalysisCaps, Shape};
use derivkit::synth::{generate, SynthConfig};
use derivkit::tokenizer::{SegmentationMethod, Vocab, DEFAULT_UNK};

use super::{load_lexicon, load_list};
use crate::config::Config;
use crate::io::{
    check_paths, corpus_files, read_jsonl, require_seed, write_json, write_jsonl, write_text,
};
use crate::CliError;

#[derive(Subcommand)]
pub enum Cmd {
    /// Filter corpus sentences and collect derivatives in context.
    Extract {
        #[arg(long)]
        lexicon: PathBuf,
        /// Corpus files; plain sentences or JSON records per line.
        #[arg(long)]
        corpus: Vec<PathBuf>,
        /// Used when no --corpus is given.
        #[arg(long, env = "DERIVKIT_CORPUS_DIR")]
        corpus_dir: Option<PathBuf>,
        #[arg(long)]
        min_words: Option<usize>,
        #[arg(long)]
        max_words: Option<usize>,
        /// Author names to drop, one per line.
        #[arg(long)]
        bots: Option<PathBuf>,
        #[arg(long)]
        max_prefixes: Option<u8>,
        #[arg(long)]
        max_suffixes: Option<u8>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Ingest and extraction counts as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Assign frequency bins and drop types with frequency 128 or more.
    Bin {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the per-bin statistics table.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Per-bin mean frequency and derivative/sentence counts per shape.
    Stats {
        /// Binned occurrences.
        #[arg(long)]
        input: PathBuf,
        /// Overrides the count recorded by `dataset extract`.
        #[arg(long)]
        corpus_tokens: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split each (shape, bin) group into train, dev and test.
    Split {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        setting: Option<Setting>,
        #[arg(long)]
        seed: Option<u64>,
        /// train,dev,test
        #[arg(long, value_delimiter = ',')]
        ratios: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        shape: Vec<Shape>,
        #[arg(long, value_delimiter = ',')]
        bins: Vec<FrequencyBin>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Achieved shares per group as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Turn dataset items into cloze records.
    Mask {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        split: Option<Split>,
        #[arg(long, value_delimiter = ',')]
        shape: Vec<Shape>,
        #[arg(long, value_delimiter = ',')]
        bins: Vec<FrequencyBin>,
        /// `whole` masks the derivative, `affix` masks its affix pieces.
        #[arg(long, default_value = "whole")]
        mode: String,
        /// Segmentation for affix mode.
        #[arg(long)]
        method: Option<SegmentationMethod>,
        /// Vocabulary for affix mode.
        #[arg(long)]
        vocab: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Balanced binary set: each prefixed item plus a wrong-prefix copy.
    Wellformed {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic corpus with a planted cue per affix.
    Synth {
        #[arg(long)]
        seed: Option<u64>,
        /// Receives corpus.txt, vocab.txt, lexicon.txt and cues.json.
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long)]
        bases_per_label: Option<usize>,
    },
}

fn selected(shapes: &[Shape], bins: &[FrequencyBin], shape: Shape, bin: FrequencyBin) -> bool {
    (shapes.is_empty() || shapes.contains(&shape)) && (bins.is_empty() || bins.contains(&bin))
}

fn corpus_tokens(header: Option<&Header>, flag: Option<u64>) -> Result<u64> {
    flag.or_else(|| header.and_then(|h| h.get_u64("corpus_tokens")))
        .ok_or_else(|| {
            CliError::new(
                "invalid_input",
                "corpus token count unknown: input lacks a header, pass --corpus-tokens",
            )
            .into()
        })
}

pub fn run(cmd: Cmd, cfg: &Config) -> Result<()> {
    match cmd {
        Cmd::Extract {
            lexicon,
            corpus,
            corpus_dir,
            min_words,
            max_words,
            bots,
            max_prefixes,
            max_suffixes,
            out,
            report,
        } => {
            let files = corpus_files(&corpus, corpus_dir.as_deref())?;
            let mut inputs: Vec<&Path> = files.iter().map(PathBuf::as_path).collect();
            inputs.push(&lexicon);
            inputs.extend(bots.as_deref());
            check_paths(&inputs, &[out.as_deref(), report.as_deref()])?;

            let lex = load_lexicon(&lexicon)?;
            let defaults = FilterConfig::default();
            let filter = FilterConfig {
                min_words: cfg.pick_or(min_words, "min-words", defaults.min_words)?,
                max_words: cfg.pick_or(max_words, "max-words", defaults.max_words)?,
                bots: bots
                    .map(|p| load_list(&p))
                    .transpose()?
                    .unwrap_or_default()
                    .into_iter()
                    .collect(),
                language: None,
            };
            let caps = AnalysisCaps {
                max_prefixes: cfg.pick_or(max_prefixes, "max-prefixes", 1)?,
                max_suffixes: cfg.pick_or(max_suffixes, "max-suffixes", 1)?,
            };
            let ingested = ingest_paths(&files, &filter);
            let failed = ingested.errors.len();
            for (path, e) in ingested.errors {
                if failed == files.len() {
                    return Err(
                        anyhow::Error::new(e).context(format!("ingesting {}", path.display()))
                    );
                }
                log::warn!("skipping {}: {e}", path.display());
            }
            let (occ, ext) = extract(&ingested.sentences, &lex, caps);
            log::info!(
                "{} sentences kept, {} occurrences",
                ingested.report.emitted,
                occ.len()
            );
            let header = Header::new("dataset extract", None)
                .with("corpus_tokens", ingested.report.corpus_tokens)
                .with("files", files.len() - failed);
            write_jsonl(out.as_deref(), &header, &occ)?;
            if let Some(r) = report {
                write_json(
                    Some(&r),
                    &serde_json::json!({ "ingest": ingested.report, "extract": ext }),
                )?;
            }
            Ok(())
        }
        Cmd::Bin { input, out, stats } => {
            check_paths(&[&input], &[out.as_deref(), stats.as_deref()])?;
            let (header, occ) = read_jsonl::<Occurrence>(&input)?;
            let set = bin_occurrences(occ);
            let mut h = Header::new("dataset bin", None)
                .with("excluded_types", set.excluded_types)
                .with("excluded_occurrences", set.excluded_occurrences);
            let tokens = header.as_ref().and_then(|h| h.get_u64("corpus_tokens"));
            if let Some(t) = tokens {
                h = h.with("corpus_tokens", t);
            }
            write_jsonl(out.as_deref(), &h, &set.items)?;
            if let Some(s) = stats {
                let t = corpus_tokens(header.as_ref(), None)?;
                write_text(Some(&s), &BinStats::compute(&set.items, t).to_tsv())?;
            }
            Ok(())
        }
        Cmd::Stats {
            input,
            corpus_tokens: flag,
            out,
        } => {
            check_paths(&[&input], &[out.as_deref()])?;
            let (header, items) = read_jsonl::<BinnedOccurrence>(&input)?;
            let t = corpus_tokens(header.as_ref(), flag)?;
            write_text(out.as_deref(), &BinStats::compute(&items, t).to_tsv())
        }
        Cmd::Split {
            input,
            setting,
            seed,
            ratios,
            shape,
            bins,
            out,
            report,
        } => {
            check_paths(&[&input], &[out.as_deref(), report.as_deref()])?;
            let seed = require_seed(cfg.pick(seed, "seed")?)?;
            let setting = cfg.pick_or(setting, "setting", Setting::Shared)?;
            let ratios = match ratios.as_slice() {
                [] => SplitRatios::default(),
                [train, dev, test] => SplitRatios {
                    train: *train,
                    dev: *dev,
                    test: *test,
                },
                _ => {
                    return Err(
                        CliError::new("invalid_input", "--ratios takes train,dev,test").into(),
                    )
                }
            };
            let (_, items) = read_jsonl::<BinnedOccurrence>(&input)?;
            let items: Vec<_> = items
                .into_iter()
                .filter(|b| selected(&shape, &bins, b.occurrence.shape, b.bin))
                .collect();
            let (ds, groups) = split(&items, setting, ratios, seed)?;
            let header = Header::new("dataset split", Some(seed))
                .with("setting", setting)
                .with("ratios", [ratios.train, ratios.dev, ratios.test]);
            write_jsonl(out.as_deref(), &header, &ds)?;
            if let Some(r) = report {
                write_json(Some(&r), &groups)?;
            }
            Ok(())
        }
        Cmd::Mask {
            input,
            split,
            shape,
            bins,
            mode,
            method,
            vocab,
            out,
        } => {
            let inputs: Vec<&Path> = std::iter::once(input.as_path())
                .chain(vocab.as_deref())
                .collect();
            check_paths(&inputs, &[out.as_deref()])?;
            let (_, items) = read_jsonl::<DatasetItem>(&input)?;
            let items: Vec<_> = items
                .into_iter()
                .filter(|it| {
                    split.is_none_or(|s| s == it.split) && selected(&shape, &bins, it.shape, it.bin)
                })
                .collect();
            let vocab = vocab.map(|p| Vocab::load(&p, DEFAULT_UNK)).transpose()?;
            let method = cfg.pick(method, "method")?;
            let mode = match (mode.as_str(), method, vocab.as_ref()) {
                ("whole", _, _) => MaskMode::WholeWord,
                ("affix", Some(method), Some(vocab)) => MaskMode::Affix { method, vocab },
                ("affix", _, _) => {
                    return Err(CliError::new(
                        "invalid_input",
                        "affix masking needs --method and --vocab",
                    )
                    .into())
                }
                (m, _, _) => {
                    return Err(
                        CliError::new("invalid_input", format!("unknown mask mode `{m}`")).into(),
                    )
                }
            };
            let records: Vec<ClozeRecord> = items
                .iter()
                .map(|it| mask(it, mode))
                .collect::<derivkit::Result<_>>()?;
            let mut header = Header::new("dataset mask", None).with("mode", mode_name(&mode));
            if let Some(m) = method {
                header = header.with("method", m);
            }
            write_jsonl(out.as_deref(), &header, &records)
        }
        Cmd::Wellformed {
            input,
            lexicon,
            seed,
            out,
        } => {
            check_paths(&[&input, &lexicon], &[out.as_deref()])?;
            let seed = require_seed(cfg.pick(seed, "seed")?)?;
            let lex = load_lexicon(&lexicon)?;
            let (_, items) = read_jsonl::<DatasetItem>(&input)?;
            let (wf, skipped) = build_wellformedness(&items, &lex, seed)?;
            let header = Header::new("dataset wellformed", Some(seed)).with("skipped", skipped);
            write_jsonl(out.as_deref(), &header, &wf)
        }
        Cmd::Synth {
            seed,
            out_dir,
            noise,
            bases_per_label,
        } => {
            let seed = require_seed(cfg.pick(seed, "seed")?)?;
            if !out_dir.is_dir() {
                return Err(CliError::new(
                    "missing_output_dir",
                    format!("{} does not exist", out_dir.display()),
                )
                .into());
            }
            let defaults = SynthConfig::default();
            let synth = SynthConfig {
                noise: cfg.pick_or(noise, "noise", defaults.noise)?,
                bases_per_label: cfg.pick_or(
                    bases_per_label,
                    "bases-per-label",
                    defaults.bases_per_label,
                )?,
                ..defaults
            };
            let corpus = generate(&synth, seed)?;
            let mut text = corpus.sentences.join("\n");
            text.push('\n');
            write_text(Some(&out_dir.join("corpus.txt")), &text)?;
            write_text(
                Some(&out_dir.join("vocab.txt")),
                &(corpus.vocab.join("\n") + "\n"),
            )?;
            write_text(
                Some(&out_dir.join("lexicon.txt")),
                &corpus.lexicon.to_text(),
            )?;
            write_json(Some(&out_dir.join("cues.json")), &corpus.cues)?;
            Ok(())
        }
    }
}

fn mode_name(mode: &MaskMode<'_>) -> &'static str {
    match mode {
        MaskMode::WholeWord => "whole",
        MaskMode::Affix { .. } => "affix",
    }
}
