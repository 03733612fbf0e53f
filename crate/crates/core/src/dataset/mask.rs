use serde::{Deserialize, Serialize};

use super::split::DatasetItem;
use crate::error::{Error, Result};
use crate::morpho::Shape;
use crate::tokenizer::{segment, SegmentationMethod, Vocab};

pub const MASK_TOKEN: &str = "[MASK]";

#[derive(Debug, Clone, Copy)]
pub enum MaskMode<'a> {
    /// The whole derivative becomes one mask token.
    WholeWord,
    /// The derivative is segmented and only its affix pieces are masked.
    Affix {
        method: SegmentationMethod,
        vocab: &'a Vocab,
    },
}

/// A masked item ready for a predictor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClozeRecord {
    pub id: String,
    pub tokens: Vec<String>,
    /// Positions of mask tokens in `tokens`.
    pub masks: Vec<usize>,
    /// Start and length of the derivative slot in `tokens`.
    pub span: (usize, usize),
    pub base: String,
    pub shape: Shape,
    pub gold: String,
    pub mode: String,
    pub method: Option<SegmentationMethod>,
    /// Slot positions whose embedding comes from the projection table.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub projected: Vec<usize>,
}

impl ClozeRecord {
    /// Tokens left of the derivative slot.
    pub fn left(&self) -> &[String] {
        &self.tokens[..self.span.0]
    }

    pub fn right(&self) -> &[String] {
        &self.tokens[self.span.0 + self.span.1..]
    }
}

pub fn mask(item: &DatasetItem, mode: MaskMode<'_>) -> Result<ClozeRecord> {
    let derivation = item.derivation()?;
    let no_derivative = || Error::SentenceWithoutDerivative(item.id.clone());
    let word = item.tokens.get(item.d).ok_or_else(no_derivative)?;
    let forms = crate::morpho::derive(&derivation.base, &derivation.bundle);
    let lower = word.to_lowercase();
    if !forms.contains(&lower) && !forms.contains(&lower.replacen('-', "", 1)) {
        return Err(no_derivative());
    }

    let left = &item.tokens[..item.d];
    let right = &item.tokens[item.d + 1..];
    let (slot, masked, projected, mode_name, method) = match mode {
        MaskMode::WholeWord => (vec![MASK_TOKEN.to_string()], vec![0], vec![], "whole", None),
        MaskMode::Affix { method, vocab } => {
            let seg = segment(&derivation, method, vocab)?;
            let slot = seg
                .tokens
                .tokens
                .iter()
                .zip(&seg.maskable)
                .map(|(t, &m)| if m { MASK_TOKEN.to_string() } else { t.clone() })
                .collect();
            let projected = seg
                .projected
                .iter()
                .enumerate()
                .filter_map(|(i, &p)| p.then_some(i))
                .collect();
            (
                slot,
                seg.masked_positions(),
                projected,
                "affix",
                Some(method),
            )
        }
    };

    let start = left.len();
    let span = (start, slot.len());
    let mut tokens = left.to_vec();
    tokens.extend(slot);
    tokens.extend_from_slice(right);
    Ok(ClozeRecord {
        id: item.id.clone(),
        tokens,
        masks: masked.into_iter().map(|i| i + start).collect(),
        span,
        base: item.base.clone(),
        shape: item.shape,
        gold: item.label(),
        mode: mode_name.into(),
        method,
        projected: projected.into_iter().map(|i| i + start).collect(),
    })
}

/// Restores the sentence by putting `surface` back into the derivative slot.
pub fn unmask(record: &ClozeRecord, surface: &str) -> Vec<String> {
    let mut out = record.left().to_vec();
    out.push(surface.to_string());
    out.extend_from_slice(record.right());
    out
}
