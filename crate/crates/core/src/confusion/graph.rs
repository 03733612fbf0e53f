use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matrix::ConfusionMatrix;
use crate::error::{Error, Result};

/// Edge threshold on confusion probabilities.
pub const DEFAULT_THETA: f64 = 0.08;

/// Betweenness values this close to the maximum count as tied.
const TIE_EPS: f64 = 1e-9;

/// Directed graph over labels with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionGraph {
    pub labels: Vec<String>,
    pub theta: f64,
    pub adjacency: Vec<Vec<usize>>,
}

impl ConfusionGraph {
    pub fn from_edges(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({a}, {b}) outside {n} nodes"
                )));
            }
            if a != b {
                adjacency[a].push(b);
            }
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
            adj.dedup();
        }
        Ok(ConfusionGraph {
            labels,
            theta: f64::NAN,
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, adj)| adj.iter().map(move |&b| (a, b)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    fn remove_edge(&mut self, a: usize, b: usize) {
        if let Ok(i) = self.adjacency[a].binary_search(&b) {
            self.adjacency[a].remove(i);
        }
    }

    /// `src<TAB>dst` per edge.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (a, b) in self.edges() {
            let _ = writeln!(out, "{}\t{}", self.labels[a], self.labels[b]);
        }
        out
    }
}

/// Edge `i -> j` iff `C[i][j] > theta` and `i != j`.
pub fn threshold_graph(c: &ConfusionMatrix, theta: f64) -> ConfusionGraph {
    let adjacency = c
        .values
        .iter()
        .enumerate()
        .map(|(i, row)| {
            (0..row.len())
                .filter(|&j| j != i && row[j] > theta)
                .collect()
        })
        .collect();
    ConfusionGraph {
        labels: c.labels.clone(),
        theta,
        adjacency,
    }
}

/// Single-source Brandes accumulation; returns a dense n*n contribution.
fn source_betweenness(g: &ConfusionGraph, s: usize) -> Vec<f64> {
    let n = g.node_count();
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    sigma[s] = 1.0;
    dist[s] = 0;
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in &g.adjacency[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
                preds[w].push(v);
            }
        }
    }
    let mut delta = vec![0.0f64; n];
    let mut eb = vec![0.0f64; n * n];
    for &w in order.iter().rev() {
        for &v in &preds[w] {
            let c = sigma[v] / sigma[w] * (1.0 + delta[w]);
            eb[v * n + w] += c;
            delta[v] += c;
        }
    }
    eb
}

/// Unnormalized directed edge betweenness: for each ordered pair (s, t), every
/// edge on a shortest s-t path receives the fraction of those paths using it.
/// Dense n*n, indexed `[src * n + dst]`.
pub fn edge_betweenness(g: &ConfusionGraph) -> Vec<f64> {
    let n = g.node_count();
    let parts: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| source_betweenness(g, s))
        .collect();
    let mut total = vec![0.0; n * n];
    for p in parts {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    total
}

/// Weakly connected components, each sorted, ordered by smallest member.
pub fn weak_components(g: &ConfusionGraph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, b) in g.edges() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if block_of[r] == usize::MAX {
            block_of[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[block_of[r]].push(v);
    }
    blocks
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub labels: Vec<String>,
    pub requested_splits: usize,
    /// Components before any edge is removed.
    pub initial: Vec<Vec<String>>,
    /// Components after each split event, coarsest first.
    pub partitions: Vec<Vec<Vec<String>>>,
    /// Every removed edge in removal order.
    pub removed: Vec<(String, String)>,
}

impl Clustering {
    pub fn final_partition(&self) -> &[Vec<String>] {
        self.partitions.last().unwrap_or(&self.initial)
    }

    pub fn splits(&self) -> usize {
        self.partitions.len()
    }
}

fn named(g: &ConfusionGraph, blocks: &[Vec<usize>]) -> Vec<Vec<String>> {
    blocks
        .iter()
        .map(|b| b.iter().map(|&v| g.labels[v].clone()).collect())
        .collect()
}

/// Repeatedly removes the edge of highest betweenness (ties: smallest
/// `(src, dst)` by label) and records the components whenever their number
/// grows, until `k_splits` splits happen or no edges remain.
pub fn girvan_newman(graph: &ConfusionGraph, k_splits: usize) -> Result<Clustering> {
    if k_splits == 0 {
        return Err(Error::InvalidInput(
            "at least one split must be requested".into(),
        ));
    }
    let mut g = graph.clone();
    let initial = weak_components(&g);
    if g.edge_count() == 0 {
        log::warn!("confusion graph has no edges; nothing to split");
    }
    let n = g.node_count();
    let mut count = initial.len();
    let mut clustering = Clustering {
        labels: g.labels.clone(),
        requested_splits: k_splits,
        initial: named(&g, &initial),
        partitions: Vec::new(),
        removed: Vec::new(),
    };
    while clustering.partitions.len() < k_splits && g.edge_count() > 0 {
        let eb = edge_betweenness(&g);
        let edges = g.edges();
        let max = edges
            .iter()
            .map(|&(a, b)| eb[a * n + b])
            .fold(f64::NEG_INFINITY, f64::max);
        let floor = max - TIE_EPS * max.abs().max(1.0);
        let &(a, b) = edges
            .iter()
            .filter(|&&(a, b)| eb[a * n + b] >= floor)
            .min_by(|x, y| (&g.labels[x.0], &g.labels[x.1]).cmp(&(&g.labels[y.0], &g.labels[y.1])))
            .expect("graph has edges");
        g.remove_edge(a, b);
        clustering
            .removed
            .push((g.labels[a].clone(), g.labels[b].clone()));
        let blocks = weak_components(&g);
        if blocks.len() > count {
            count = blocks.len();
            clustering.partitions.push(named(&g, &blocks));
        }
    }
    Ok(clustering)
}
