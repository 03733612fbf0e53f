use serde::{Deserialize, Serialize};

use crate::dataset::MASK_TOKEN;

/// Feature extraction settings, stored with every trained model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    /// Context words taken on each side of the derivative slot.
    pub window: usize,
    pub ngram_min: usize,
    pub ngram_max: usize,
    pub buckets: u32,
}

impl Default for FeatureSpec {
    fn default() -> Self {
        FeatureSpec {
            window: 5,
            ngram_min: 2,
            ngram_max: 4,
            buckets: 1 << 18,
        }
    }
}

/// 64-bit FNV-1a. Part of the model format, so it must never change.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn bucket(spec: &FeatureSpec, namespace: &str, value: &str) -> u32 {
    let key = format!("{namespace}\u{1f}{value}");
    (fnv1a(key.as_bytes()) % spec.buckets as u64) as u32
}

/// Sparse feature vector sorted by bucket: a bias, lowercased context words
/// within the window, and character n-grams of the base padded with `^`/`$`.
pub fn extract_features(
    spec: &FeatureSpec,
    left: &[String],
    right: &[String],
    base: &str,
) -> Vec<(u32, f64)> {
    let mut raw: Vec<u32> = vec![bucket(spec, "b", "")];
    let near_left = &left[left.len().saturating_sub(spec.window)..];
    let near_right = &right[..right.len().min(spec.window)];
    for w in near_left.iter().chain(near_right) {
        if w != MASK_TOKEN {
            raw.push(bucket(spec, "w", &w.to_lowercase()));
        }
    }
    let padded: Vec<char> = std::iter::once('^')
        .chain(base.to_lowercase().chars())
        .chain(std::iter::once('$'))
        .collect();
    for n in spec.ngram_min.max(1)..=spec.ngram_max {
        for g in padded.windows(n) {
            raw.push(bucket(spec, "g", &g.iter().collect::<String>()));
        }
    }
    raw.sort_unstable();
    let mut out: Vec<(u32, f64)> = Vec::with_capacity(raw.len());
    for b in raw {
        match out.last_mut() {
            Some((last, v)) if *last == b => *v += 1.0,
            _ => out.push((b, 1.0)),
        }
    }
    out
}
