use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::features::{extract_features, FeatureSpec};
use super::labels::LabelSpace;
use crate::dataset::ClozeRecord;
use crate::error::{Error, Result};
use crate::eval::PredictionRecord;
use crate::morpho::Shape;

pub const MODEL_FORMAT: &str = "derivkit-softmax";
pub const MODEL_VERSION: u32 = 1;

/// Rescale the stored weights once the implicit L2 decay factor gets this small.
const MIN_SCALE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SoftmaxHyper {
    pub lr: f64,
    pub epochs: usize,
    pub l2: f64,
    pub batch_size: usize,
    /// Seeds the per-epoch shuffle.
    pub seed: u64,
}

impl Default for SoftmaxHyper {
    fn default() -> Self {
        SoftmaxHyper {
            lr: 0.5,
            epochs: 10,
            l2: 1e-5,
            batch_size: 32,
            seed: 0,
        }
    }
}

impl SoftmaxHyper {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(m.to_string()));
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return bad("learning rate must be positive");
        }
        if self.l2.is_nan() || self.l2 < 0.0 || self.lr * self.l2 >= 1.0 {
            return bad("l2 must be non-negative with lr * l2 < 1");
        }
        if self.epochs == 0 || self.batch_size == 0 {
            return bad("epochs and batch size must be at least 1");
        }
        Ok(())
    }
}

/// A training example over dense row indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub features: Vec<(usize, f64)>,
    pub label: usize,
}

/// Weights for one shape: a row per hashed bucket seen in training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Head {
    pub labels: Vec<String>,
    /// Sorted bucket ids; `weights[i]` belongs to `buckets[i]`.
    pub buckets: Vec<u32>,
    pub weights: Vec<Vec<f64>>,
}

impl Head {
    fn logits(&self, features: &[(u32, f64)]) -> Vec<f64> {
        let mut z = vec![0.0; self.labels.len()];
        for (b, x) in features {
            if let Ok(row) = self.buckets.binary_search(b) {
                for (zk, w) in z.iter_mut().zip(&self.weights[row]) {
                    *zk += x * w;
                }
            }
        }
        z
    }

    pub fn probabilities(&self, features: &[(u32, f64)]) -> Vec<f64> {
        softmax(&self.logits(features))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftmaxModel {
    pub format: String,
    pub version: u32,
    pub spec: FeatureSpec,
    pub hyper: SoftmaxHyper,
    pub heads: BTreeMap<Shape, Head>,
}

impl SoftmaxModel {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: SoftmaxModel =
            serde_json::from_str(text).map_err(|source| Error::Json { line: 1, source })?;
        if m.format != MODEL_FORMAT || m.version != MODEL_VERSION {
            return Err(Error::Parse(format!(
                "unsupported model format {} v{} (expected {MODEL_FORMAT} v{MODEL_VERSION})",
                m.format, m.version
            )));
        }
        for (shape, h) in &m.heads {
            let consistent = h.buckets.len() == h.weights.len()
                && h.buckets.windows(2).all(|w| w[0] < w[1])
                && h.weights
                    .iter()
                    .all(|r| r.len() == h.labels.len() && r.iter().all(|w| w.is_finite()));
            if !consistent {
                return Err(Error::Parse(format!("{shape} head is malformed")));
            }
        }
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub examples: usize,
    pub final_loss: f64,
    pub train_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub shapes: BTreeMap<Shape, ShapeReport>,
    /// Example-weighted mean of the per-shape objectives.
    pub final_loss: f64,
}

fn softmax(z: &[f64]) -> Vec<f64> {
    let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - max).exp()).collect();
    let sum: f64 = e.iter().sum();
    e.into_iter().map(|v| v / sum).collect()
}

fn dense_logits(ex: &Example, w: &[f64], k: usize, scale: f64) -> Vec<f64> {
    let mut z = vec![0.0; k];
    for &(row, x) in &ex.features {
        for (zk, wk) in z.iter_mut().zip(&w[row * k..(row + 1) * k]) {
            *zk += x * wk;
        }
    }
    if scale != 1.0 {
        z.iter_mut().for_each(|v| *v *= scale);
    }
    z
}

/// Mean cross-entropy plus `l2 / 2 * ||W||^2` and its gradient. `weights`
/// is row-major with `n_labels` columns.
pub fn loss_and_grad(
    examples: &[Example],
    n_labels: usize,
    weights: &[f64],
    l2: f64,
) -> (f64, Vec<f64>) {
    let n = examples.len().max(1) as f64;
    let mut grad: Vec<f64> = weights.iter().map(|w| l2 * w).collect();
    let mut loss = 0.5 * l2 * weights.iter().map(|w| w * w).sum::<f64>();
    for ex in examples {
        let p = softmax(&dense_logits(ex, weights, n_labels, 1.0));
        loss -= p[ex.label].ln() / n;
        for &(row, x) in &ex.features {
            let g = &mut grad[row * n_labels..(row + 1) * n_labels];
            for (k, gk) in g.iter_mut().enumerate() {
                let y = (k == ex.label) as u8 as f64;
                *gk += x * (p[k] - y) / n;
            }
        }
    }
    (loss, grad)
}

/// One gradient step on `batch`. The true weights are `scale * v`; the L2
/// decay only touches `scale`, so the step costs O(active rows).
fn step(batch: &[&Example], v: &mut [f64], scale: &mut f64, k: usize, lr: f64, l2: f64) {
    let probs: Vec<Vec<f64>> = batch
        .iter()
        .map(|ex| softmax(&dense_logits(ex, v, k, *scale)))
        .collect();
    *scale *= 1.0 - lr * l2;
    let c = lr / (batch.len() as f64 * *scale);
    for (ex, p) in batch.iter().zip(&probs) {
        for &(row, x) in &ex.features {
            let w = &mut v[row * k..(row + 1) * k];
            for (j, wj) in w.iter_mut().enumerate() {
                let y = (j == ex.label) as u8 as f64;
                *wj -= c * x * (p[j] - y);
            }
        }
    }
    if *scale < MIN_SCALE {
        v.iter_mut().for_each(|w| *w *= *scale);
        *scale = 1.0;
    }
}

fn train_head(
    examples: &[Example],
    rows: usize,
    k: usize,
    hyper: &SoftmaxHyper,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let mut v = vec![0.0; rows * k];
    let mut scale = 1.0;
    let mut order: Vec<&Example> = examples.iter().collect();
    for _ in 0..hyper.epochs {
        order.shuffle(rng);
        for batch in order.chunks(hyper.batch_size) {
            step(batch, &mut v, &mut scale, k, hyper.lr, hyper.l2);
        }
    }
    v.iter_mut().for_each(|w| *w *= scale);
    v
}

fn check_whole_word(r: &ClozeRecord) -> Result<()> {
    if r.mode != "whole" {
        return Err(Error::InvalidInput(format!(
            "{}: softmax baseline needs whole-word masking",
            r.id
        )));
    }
    Ok(())
}

/// Mini-batch gradient descent on cross-entropy with L2, one head per shape.
/// The softmax during training spans the labels seen in training; the other
/// labels keep zero weights and are still ranked at prediction time.
pub fn train_softmax(
    records: &[ClozeRecord],
    labels: &LabelSpace,
    spec: FeatureSpec,
    hyper: &SoftmaxHyper,
) -> Result<(SoftmaxModel, TrainReport)> {
    if records.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    hyper.validate()?;
    if spec.buckets == 0 || spec.ngram_min > spec.ngram_max {
        return Err(Error::InvalidInput("invalid feature spec".into()));
    }
    for r in records {
        check_whole_word(r)?;
        labels.labels(r.shape)?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
    let mut heads = BTreeMap::new();
    let mut shapes = BTreeMap::new();
    for (shape, label_list) in labels.iter() {
        let hashed: Vec<(Vec<(u32, f64)>, usize)> = records
            .iter()
            .filter(|r| r.shape == shape)
            .map(|r| {
                let y = label_list
                    .binary_search(&r.gold)
                    .map_err(|_| Error::UnknownLabel(r.gold.clone()))?;
                Ok((extract_features(&spec, r.left(), r.right(), &r.base), y))
            })
            .collect::<Result<_>>()?;
        let mut buckets: Vec<u32> = hashed
            .iter()
            .flat_map(|(f, _)| f.iter().map(|x| x.0))
            .collect();
        buckets.sort_unstable();
        buckets.dedup();
        let examples: Vec<Example> = hashed
            .into_iter()
            .map(|(f, label)| Example {
                features: f
                    .into_iter()
                    .map(|(b, x)| (buckets.binary_search(&b).expect("bucket collected"), x))
                    .collect(),
                label,
            })
            .collect();

        let k = label_list.len();
        // Only labels seen in training take part; the others keep zero weight.
        let mut observed: Vec<usize> = examples.iter().map(|ex| ex.label).collect();
        observed.sort_unstable();
        observed.dedup();
        let local: Vec<Example> = examples
            .iter()
            .map(|ex| Example {
                features: ex.features.clone(),
                label: observed.binary_search(&ex.label).expect("label observed"),
            })
            .collect();
        let ko = observed.len();
        let trained = train_head(&local, buckets.len(), ko, hyper, &mut rng);
        let mut flat = vec![0.0; buckets.len() * k];
        for row in 0..buckets.len() {
            for (j, &col) in observed.iter().enumerate() {
                flat[row * k + col] = trained[row * ko + j];
            }
        }
        if !examples.is_empty() {
            let (loss, _) = loss_and_grad(&local, ko, &trained, hyper.l2);
            let hits = examples
                .iter()
                .filter(|ex| {
                    let z = dense_logits(ex, &flat, k, 1.0);
                    argmax(&z, label_list) == ex.label
                })
                .count();
            shapes.insert(
                shape,
                ShapeReport {
                    examples: examples.len(),
                    final_loss: loss,
                    train_accuracy: hits as f64 / examples.len() as f64,
                },
            );
        }
        heads.insert(
            shape,
            Head {
                labels: label_list.to_vec(),
                weights: flat.chunks(k.max(1)).map(<[f64]>::to_vec).collect(),
                buckets,
            },
        );
    }
    let n: usize = shapes.values().map(|s| s.examples).sum();
    let final_loss = shapes
        .values()
        .map(|s| s.final_loss * s.examples as f64)
        .sum::<f64>()
        / n as f64;
    log::info!("softmax trained on {n} examples, final loss {final_loss:.6}");
    Ok((
        SoftmaxModel {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            spec,
            hyper: *hyper,
            heads,
        },
        TrainReport { shapes, final_loss },
    ))
}

/// Index of the best score, ties to the lexicographically smaller label.
fn argmax(scores: &[f64], labels: &[String]) -> usize {
    (0..scores.len())
        .max_by(|&a, &b| {
            scores[a]
                .total_cmp(&scores[b])
                .then_with(|| labels[b].cmp(&labels[a]))
        })
        .unwrap_or(0)
}

/// Full label ranking by descending probability, ties broken by label.
pub fn predict_softmax(
    model: &SoftmaxModel,
    records: &[ClozeRecord],
) -> Result<Vec<PredictionRecord>> {
    records
        .par_iter()
        .map(|r| {
            check_whole_word(r)?;
            let head = model.heads.get(&r.shape).ok_or_else(|| {
                Error::InvalidInput(format!("{}: model has no {} head", r.id, r.shape))
            })?;
            let feats = extract_features(&model.spec, r.left(), r.right(), &r.base);
            let p = head.probabilities(&feats);
            let mut ranking: Vec<(String, f64)> = head.labels.iter().cloned().zip(p).collect();
            ranking.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            Ok(PredictionRecord::new(r.id.clone(), ranking))
        })
        .collect()
}
