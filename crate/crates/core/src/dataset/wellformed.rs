use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::split::DatasetItem;
use crate::error::{Error, Result};
use crate::morpho::{Affix, Lexicon, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WellFormednessLabel {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WellFormednessItem {
    #[serde(flatten)]
    pub item: DatasetItem,
    pub label: WellFormednessLabel,
}

/// One attested and one corrupted item per prefixed source item. The
/// corrupted item keeps the context and base, swaps in a prefix drawn
/// uniformly from the other lexicon prefixes and puts the resulting
/// derivative in the slot. Items of other shapes are
/// skipped; the second return value counts them.
pub fn build_wellformedness(
    items: &[DatasetItem],
    lexicon: &Lexicon,
    seed: u64,
) -> Result<(Vec<WellFormednessItem>, usize)> {
    let prefixes: Vec<&Affix> = lexicon.prefixes().iter().collect();
    if prefixes.len() < 2 {
        return Err(Error::SinglePrefix);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut skipped = 0;
    for it in items {
        let Some(attested) = it.prefix.as_deref().filter(|_| it.shape == Shape::P) else {
            skipped += 1;
            continue;
        };
        let others: Vec<&str> = prefixes
            .iter()
            .map(|a| a.form())
            .filter(|f| *f != attested)
            .collect();
        let negative_prefix = others.choose(&mut rng).expect("at least one other prefix");

        let mut pos = it.clone();
        pos.id = format!("{}:pos", it.id);
        let mut neg = it.clone();
        neg.id = format!("{}:neg", it.id);
        neg.prefix = Some(negative_prefix.to_string());
        let corrupted = crate::morpho::derive(&it.base, &neg.bundle()?)
            .into_iter()
            .next()
            .ok_or_else(|| Error::InvalidInput(format!("{}: cannot derive a negative", it.id)))?;
        if let Some(slot) = neg.tokens.get_mut(it.d) {
            *slot = corrupted;
        }
        out.push(WellFormednessItem {
            item: pos,
            label: WellFormednessLabel::Positive,
        });
        out.push(WellFormednessItem {
            item: neg,
            label: WellFormednessLabel::Negative,
        });
    }
    Ok((out, skipped))
}
