use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::Subcommand;
use derivkit::confusion::{
    confusion_matrix, girvan_newman, order_for_heatmap, threshold_graph, weak_components,
    Clustering, ConfusionGraph, ConfusionMatrix, DEFAULT_THETA,
};
use derivkit::eval::{GoldLabel, PredictionRecord};

use super::{load_golds, load_list, GoldFilter};
use crate::config::Config;
use crate::io::{check_paths, read_json, read_jsonl, read_text, write_json, write_text};
use crate::CliError;

#[derive(Subcommand)]
pub enum Cmd {
    /// Row-normalized confusion matrix of gold against rank-1 labels.
    Matrix {
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long)]
        gold: PathBuf,
        #[command(flatten)]
        filter: GoldFilter,
        /// Label order, one per line; defaults to the sorted golds and predictions.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Matrix as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tsv: Option<PathBuf>,
    },
    /// Edges with confusion above the threshold.
    Graph {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        theta: Option<f64>,
        /// Edge list as TSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Thresholds to tabulate edge and component counts for.
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<f64>,
        #[arg(long)]
        sweep_out: Option<PathBuf>,
    },
    /// Girvan-Newman splits by edge betweenness.
    Cluster {
        /// Confusion matrix JSON, thresholded at --theta.
        #[arg(long, conflicts_with = "edges", required_unless_present = "edges")]
        matrix: Option<PathBuf>,
        /// Edge list TSV (`src<TAB>dst` with a header line).
        #[arg(long)]
        edges: Option<PathBuf>,
        /// Node labels for --edges, one per line; defaults to the edge endpoints.
        #[arg(long, requires = "edges")]
        labels: Option<PathBuf>,
        #[arg(long)]
        theta: Option<f64>,
        /// Number of splits.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Matrix rows and columns reordered by cluster.
    Heatmap {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        clusters: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_edges(path: &Path, labels: Option<&Path>) -> Result<ConfusionGraph> {
    let text = read_text(path)?;
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let (a, b) = line.split_once('\t').ok_or_else(|| {
            CliError::new(
                "invalid_input",
                format!("{}:{}: expected src<TAB>dst", path.display(), n + 1),
            )
        })?;
        pairs.push((a.trim().to_string(), b.trim().to_string()));
    }
    let names: Vec<String> = match labels {
        Some(p) => load_list(p)?,
        None => pairs
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
    };
    let index = |l: &str| {
        names.iter().position(|n| n == l).ok_or_else(|| {
            CliError::new(
                "unknown_label",
                format!("edge endpoint `{l}` is not a label"),
            )
        })
    };
    let edges = pairs
        .iter()
        .map(|(a, b)| Ok((index(a)?, index(b)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConfusionGraph::from_edges(names, &edges)?)
}

pub fn run(cmd: Cmd, cfg: &Config) -> Result<()> {
    match cmd {
        Cmd::Matrix {
            predictions,
            gold,
            filter,
            labels,
            out,
            tsv,
        } => {
            let mut inputs = vec![predictions.as_path(), gold.as_path()];
            inputs.extend(labels.as_deref());
            check_paths(&inputs, &[out.as_deref(), tsv.as_deref()])?;
            let golds: Vec<GoldLabel> = load_golds(&gold, &filter)?
                .iter()
                .map(|r| r.gold_label())
                .collect::<Result<_>>()?;
            let (_, records) = read_jsonl::<PredictionRecord>(&predictions)?;
            let labels = match labels {
                Some(p) => load_list(&p)?,
                None => {
                    let ids: BTreeSet<&str> = golds.iter().map(|g| g.id.as_str()).collect();
                    let tops = records
                        .iter()
                        .filter(|r| ids.contains(r.id.as_str()))
                        .filter_map(|r| r.top());
                    golds
                        .iter()
                        .map(|g| g.label.as_str())
                        .chain(tops)
                        .collect::<BTreeSet<_>>()
                        .into_iter()
                        .map(String::from)
                        .collect()
                }
            };
            let c = confusion_matrix(&records, &golds, &labels)?;
            write_json(out.as_deref(), &c)?;
            if let Some(p) = tsv {
                write_text(Some(&p), &c.to_tsv())?;
            }
            Ok(())
        }
        Cmd::Graph {
            matrix,
            theta,
            out,
            sweep,
            sweep_out,
        } => {
            check_paths(&[&matrix], &[out.as_deref(), sweep_out.as_deref()])?;
            let c: ConfusionMatrix = read_json(&matrix)?;
            let theta = cfg.pick_or(theta, "theta", DEFAULT_THETA)?;
            write_text(out.as_deref(), &threshold_graph(&c, theta).to_tsv())?;
            if !sweep.is_empty() {
                let mut table = String::from("theta\tedges\tcomponents\n");
                for t in sweep {
                    let g = threshold_graph(&c, t);
                    let _ = writeln!(
                        table,
                        "{t}\t{}\t{}",
                        g.edge_count(),
                        weak_components(&g).len()
                    );
                }
                match sweep_out {
                    Some(p) => write_text(Some(&p), &table)?,
                    None => eprint!("{table}"),
                }
            }
            Ok(())
        }
        Cmd::Cluster {
            matrix,
            edges,
            labels,
            theta,
            k,
            out,
        } => {
            let inputs: Vec<&Path> = [matrix.as_deref(), edges.as_deref(), labels.as_deref()]
                .into_iter()
                .flatten()
                .collect();
            check_paths(&inputs, &[out.as_deref()])?;
            let k = cfg.pick(k, "k")?.ok_or_else(|| {
                CliError::new("invalid_input", "--k (number of splits) is required")
            })?;
            let graph = match (matrix, edges) {
                (Some(m), _) => {
                    let c: ConfusionMatrix = read_json(&m)?;
                    threshold_graph(&c, cfg.pick_or(theta, "theta", DEFAULT_THETA)?)
                }
                (None, Some(e)) => read_edges(&e, labels.as_deref())?,
                (None, None) => unreachable!("clap requires one input"),
            };
            let clustering: Clustering = girvan_newman(&graph, k)?;
            if clustering.splits() < k {
                log::warn!("only {} of {k} splits were possible", clustering.splits());
            }
            write_json(out.as_deref(), &clustering)
        }
        Cmd::Heatmap {
            matrix,
            clusters,
            out,
        } => {
            check_paths(&[&matrix, &clusters], &[out.as_deref()])?;
            let c: ConfusionMatrix = read_json(&matrix)?;
            let clustering: Clustering = read_json(&clusters)?;
            write_text(
                out.as_deref(),
                &order_for_heatmap(&clustering, &c)?.to_tsv(),
            )
        }
    }
}
