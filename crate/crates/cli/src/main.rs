use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod io;

use commands::{
    baseline, confuse, dataset, eval, lexicon, productivity, projection, segcompare, tokenize,
};
use config::Config;

#[derive(Parser)]
#[command(
    name = "derivkit",
    version,
    about = "Derivational affix datasets, baselines and evaluation"
)]
struct Cli {
    /// `key = value` file supplying defaults for flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Lexicon(lexicon::Cmd),
    #[command(subcommand)]
    Dataset(dataset::Cmd),
    /// WordPiece tokenization and derivative segmentation.
    Tokenize(tokenize::Args),
    #[command(subcommand)]
    Projection(projection::Cmd),
    #[command(subcommand)]
    Baseline(baseline::Cmd),
    #[command(subcommand)]
    Eval(eval::Cmd),
    #[command(subcommand)]
    Confuse(confuse::Cmd),
    #[command(subcommand)]
    Productivity(productivity::Cmd),
    /// MRR per bin for one prediction file per segmentation method.
    Segcompare(segcompare::Args),
}

/// An error with a machine-readable kind.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

fn error_kind(e: &anyhow::Error) -> &'static str {
    for cause in e.chain() {
        if let Some(c) = cause.downcast_ref::<CliError>() {
            return c.kind;
        }
        if let Some(d) = cause.downcast_ref::<derivkit::Error>() {
            return d.kind();
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return "io";
        }
        if cause.downcast_ref::<serde_json::Error>().is_some() {
            return "json";
        }
    }
    "error"
}

/// Downstream closed stdout, as with `| head`.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>().map(std::io::Error::kind)
            == Some(std::io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<serde_json::Error>()
                .and_then(serde_json::Error::io_error_kind)
                == Some(std::io::ErrorKind::BrokenPipe)
    })
}

fn report(kind: &str, message: String) {
    let record = serde_json::json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{record}");
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(jobs) = cfg.pick(cli.jobs, "jobs")? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::new("invalid_input", e.to_string()))?;
    }
    match cli.command {
        Command::Lexicon(c) => lexicon::run(c, &cfg),
        Command::Dataset(c) => dataset::run(c, &cfg),
        Command::Tokenize(a) => tokenize::run(a, &cfg),
        Command::Projection(c) => projection::run(c, &cfg),
        Command::Baseline(c) => baseline::run(c, &cfg),
        Command::Eval(c) => eval::run(c, &cfg),
        Command::Confuse(c) => confuse::run(c, &cfg),
        Command::Productivity(c) => productivity::run(c, &cfg),
        Command::Segcompare(a) => segcompare::run(a, &cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report("usage", e.to_string().trim_end().to_string());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            report(error_kind(&e), format!("{e:#}"));
            ExitCode::FAILURE
        }
    }
}
