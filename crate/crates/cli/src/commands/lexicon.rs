use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use derivkit::morpho::build_lexicon;
use derivkit::resources::{default_prefixes, default_suffixes, english_stopwords};
use derivkit::tokenizer::{Vocab, DEFAULT_UNK};

use super::load_list;
use crate::config::Config;
use crate::io::{check_paths, write_text};

#[derive(Subcommand)]
pub enum Cmd {
    /// Identify prefixes, suffixes and bases in a WordPiece vocabulary.
    Build {
        #[arg(long)]
        vocab: PathBuf,
        /// One prefix per line; defaults to the bundled list.
        #[arg(long)]
        prefixes: Option<PathBuf>,
        #[arg(long)]
        suffixes: Option<PathBuf>,
        /// Defaults to the bundled English stopwords.
        #[arg(long)]
        stopwords: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cmd: Cmd, _cfg: &Config) -> Result<()> {
    match cmd {
        Cmd::Build {
            vocab,
            prefixes,
            suffixes,
            stopwords,
            out,
        } => {
            let inputs: Vec<_> = [
                Some(&vocab),
                prefixes.as_ref(),
                suffixes.as_ref(),
                stopwords.as_ref(),
            ]
            .into_iter()
            .flatten()
            .map(|p| p.as_path())
            .collect();
            check_paths(&inputs, &[out.as_deref()])?;
            let vocab = Vocab::load(&vocab, DEFAULT_UNK)?;
            let prefixes = prefixes
                .map(|p| load_list(&p))
                .transpose()?
                .unwrap_or_else(default_prefixes);
            let suffixes = suffixes
                .map(|p| load_list(&p))
                .transpose()?
                .unwrap_or_else(default_suffixes);
            let stopwords = match stopwords {
                Some(p) => load_list(&p)?.into_iter().collect(),
                None => english_stopwords(),
            };
            let lex = build_lexicon(vocab.tokens(), &prefixes, &suffixes, &stopwords)?;
            log::info!(
                "{} prefixes, {} suffixes, {} bases",
                lex.prefixes().len(),
                lex.suffixes().len(),
                lex.bases().len()
            );
            write_text(out.as_deref(), &lex.to_text())
        }
    }
}
