//! WordPiece tokenization and the derivative segmentations presented to a
//! subword model.

mod embedding;
mod projection;
mod segment;
mod vocab;
mod wordpiece;

pub use embedding::EmbeddingTable;
pub use projection::{
    fit_projection, project, project_missing_bases, projection_pairs, Projection, Solver,
    RIDGE_LAMBDA,
};
pub use segment::{segment, SegmentationMethod, SegmentedWord};
pub use vocab::{Vocab, DEFAULT_UNK};
pub use wordpiece::{wordpiece_internal, wordpiece_tokenize, TokenSeq, DEFAULT_MAX_WORD_CHARS};

pub const INTERNAL_MARKER: &str = "##";
