use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use derivkit::tokenizer::{
    fit_projection, project_missing_bases, projection_pairs, EmbeddingTable, Solver, Vocab,
    DEFAULT_UNK,
};
use serde::Serialize;

use super::load_lexicon;
use crate::config::Config;
use crate::io::{check_paths, write_json, write_text};

#[derive(Subcommand)]
pub enum Cmd {
    /// Fit the map from word-initial to word-internal base embeddings.
    Fit {
        #[arg(long)]
        vocab: PathBuf,
        /// Text table: `token v1 v2 ...` per line.
        #[arg(long)]
        embeddings: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        /// Fall back to a ridge solution when the normal equations are singular.
        #[arg(long)]
        allow_ridge: bool,
        /// Fitted matrix and diagnostics as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Projected `##base` embeddings for bases without one, same text format.
        #[arg(long)]
        projected_out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct ProjectionFile {
    solver: Solver,
    pairs: usize,
    dim: usize,
    residual: f64,
    /// Row-major; a row vector `e` maps to `e * matrix`.
    matrix: Vec<Vec<f64>>,
    bases: Vec<String>,
}

pub fn run(cmd: Cmd, _cfg: &Config) -> Result<()> {
    match cmd {
        Cmd::Fit {
            vocab,
            embeddings,
            lexicon,
            allow_ridge,
            out,
            projected_out,
        } => {
            check_paths(
                &[&vocab, &embeddings, &lexicon],
                &[out.as_deref(), projected_out.as_deref()],
            )?;
            let vocab = Vocab::load(&vocab, DEFAULT_UNK)?;
            let table = EmbeddingTable::load(&embeddings)?;
            let lex = load_lexicon(&lexicon)?;
            let named = projection_pairs(&vocab, &table, lex.bases());
            let pairs: Vec<_> = named
                .iter()
                .map(|(_, a, b)| (a.clone(), b.clone()))
                .collect();
            let proj = fit_projection(&pairs, allow_ridge)?;
            log::info!(
                "{} pairs, residual {:.6}, {:?}",
                proj.pairs,
                proj.residual,
                proj.solver
            );
            let m = &proj.matrix;
            let file = ProjectionFile {
                solver: proj.solver,
                pairs: proj.pairs,
                dim: proj.dim(),
                residual: proj.residual,
                matrix: (0..m.nrows())
                    .map(|i| m.row(i).iter().copied().collect())
                    .collect(),
                bases: named.into_iter().map(|(b, _, _)| b).collect(),
            };
            write_json(out.as_deref(), &file)?;
            if let Some(p) = projected_out {
                let projected = project_missing_bases(&vocab, &table, lex.bases(), &proj)?;
                write_text(Some(&p), &projected.to_text())?;
            }
            Ok(())
        }
    }
}
