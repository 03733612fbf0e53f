//! Corpus ingestion, derivative extraction in context, frequency binning,
//! train/dev/test splitting, cloze masking and the binary well-formedness
//! set.

mod bins;
mod extract;
mod ingest;
mod mask;
mod split;
mod wellformed;

pub use bins::{
    bin_occurrences, BinStats, BinStatsRow, BinnedOccurrence, BinnedSet, FrequencyBin, ShapeCounts,
};
pub use extract::{extract, ExtractReport, Occurrence};
pub use ingest::{
    ingest_paths, ingest_reader, tokenize_sentence, DropReason, FilterConfig, IngestOutput,
    IngestReport, LanguageFilter, Sentence,
};
pub use mask::{mask, unmask, ClozeRecord, MaskMode, MASK_TOKEN};
pub use split::{item_id, split, DatasetItem, GroupSplitReport, Setting, Split, SplitRatios};
pub use wellformed::{build_wellformedness, WellFormednessItem, WellFormednessLabel};
