use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::labels::{LabelSpace, Labeled};
use crate::error::Result;
use crate::eval::PredictionRecord;

/// A uniform random permutation of `labels`, scored K, K-1, ..., 1.
pub fn random_ranking<R: Rng + ?Sized>(labels: &[String], rng: &mut R) -> Vec<(String, f64)> {
    let mut order: Vec<&String> = labels.iter().collect();
    order.shuffle(rng);
    let k = order.len();
    order
        .into_iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), (k - i) as f64))
        .collect()
}

/// One independent permutation per item, drawn in item order from a single
/// seeded stream.
pub fn random_baseline<T: Labeled>(
    items: &[T],
    labels: &LabelSpace,
    seed: u64,
) -> Result<Vec<PredictionRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    items
        .iter()
        .map(|it| {
            let labels = labels.labels(it.shape())?;
            Ok(PredictionRecord::new(
                it.id(),
                random_ranking(labels, &mut rng),
            ))
        })
        .collect()
}
