use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use derivkit::morpho::{analyze, AnalysisCaps};
use derivkit::tokenizer::{
    segment, wordpiece_tokenize, SegmentationMethod, Vocab, DEFAULT_MAX_WORD_CHARS, DEFAULT_UNK,
};

use super::{load_lexicon, load_list};
use crate::config::Config;
use crate::io::{check_paths, write_text};
use crate::CliError;

#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    vocab: PathBuf,
    /// Words to tokenize.
    words: Vec<String>,
    /// File with one word per line, read after the positional words.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Segment derivatives with this method instead of plain WordPiece.
    #[arg(long)]
    method: Option<SegmentationMethod>,
    /// Needed with --method to analyze each word.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Writes `word<TAB>tokens<TAB>ids`; with --method, a fourth column lists
/// the affix positions, and words without an analysis fall back to
/// WordPiece with an empty fourth column.
pub fn run(args: Args, cfg: &Config) -> Result<()> {
    let mut inputs = vec![args.vocab.as_path()];
    inputs.extend(args.input.as_deref());
    inputs.extend(args.lexicon.as_deref());
    check_paths(&inputs, &[args.out.as_deref()])?;
    let vocab = Vocab::load(&args.vocab, DEFAULT_UNK)?;
    let mut words = args.words;
    if let Some(p) = &args.input {
        words.extend(load_list(p)?);
    }
    let method = cfg.pick(args.method, "method")?;
    let lexicon = match (method, &args.lexicon) {
        (Some(_), Some(p)) => Some(load_lexicon(p)?),
        (Some(_), None) => {
            return Err(CliError::new("invalid_input", "--method needs --lexicon").into())
        }
        (None, _) => None,
    };

    let mut out = String::new();
    for w in &words {
        let analysis = lexicon
            .as_ref()
            .and_then(|lex| analyze(w, lex, AnalysisCaps::default()));
        match (method, analysis) {
            (Some(m), Some(d)) => {
                let seg = segment(&d, m, &vocab)?;
                let positions: Vec<String> = seg
                    .masked_positions()
                    .iter()
                    .map(usize::to_string)
                    .collect();
                let _ = writeln!(
                    out,
                    "{w}\t{}\t{}\t{}",
                    seg.tokens.tokens.join(" "),
                    join_ids(&seg.tokens.ids),
                    positions.join(" ")
                );
            }
            (m, _) => {
                let seq = wordpiece_tokenize(w, &vocab, DEFAULT_MAX_WORD_CHARS);
                let _ = write!(out, "{w}\t{}\t{}", seq.tokens.join(" "), join_ids(&seq.ids));
                out.push_str(if m.is_some() { "\t\n" } else { "\n" });
            }
        }
    }
    write_text(args.out.as_deref(), &out)
}

fn join_ids(ids: &[u32]) -> String {
    ids.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}
