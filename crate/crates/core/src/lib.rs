//! Toolkit for derivational affix prediction in sentence context.
//!
//! The pipeline: build an affix/base [`morpho::Lexicon`] from a subword
//! vocabulary, extract derivatives from a sentence corpus
//! ([`dataset`]), bin them by frequency, split and mask them into cloze
//! items, score predictors ([`baselines`] or external models through the
//! prediction file format) with [`eval`], and inspect their errors with
//! [`confusion`].

pub mod baselines;
pub mod confusion;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod jsonl;
pub mod morpho;
pub mod resources;
pub mod synth;
pub mod tokenizer;

pub use error::{Error, Result};
