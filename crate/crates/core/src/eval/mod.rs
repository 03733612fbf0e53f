//! Scoring ranked affix predictions against gold affixes.
//!
//! A prediction counts as correct only when it names the gold affix bundle
//! exactly. Per-affix MRR uses reciprocal ranks zeroed beyond rank
//! [`RANK_CUTOFF`]; the headline number is the unweighted mean over the
//! affixes attested in the gold data.

mod mrr;
mod records;

pub use mrr::{
    accuracy, mrr, rank_of_gold, reciprocal_rank, wellformedness_accuracy, AffixMrr, MrrReport,
    RANK_CUTOFF,
};
pub use records::{golds_from_items, BinaryPrediction, GoldLabel, PredictionRecord};
