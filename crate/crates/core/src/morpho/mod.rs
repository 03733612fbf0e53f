//! Affix inventories and morpho-orthographically aware analysis of
//! derivatives.
//!
//! A derivative is a base plus at most one prefix and at most one suffix.
//! Spelling changes at the suffix boundary follow a small fixed rule set
//! (see [`rules`]); prefixes attach unchanged.

mod analyze;
mod lexicon;
pub mod rules;
mod types;

pub use analyze::{analyze, analyze_all, prefers, AnalysisCaps};
pub use lexicon::{build_lexicon, Lexicon};
pub use rules::{derive, derive_prefix, derive_suffix, strip_prefix, strip_suffix};
pub use types::{Affix, AffixBundle, AffixKind, Derivation, Shape};
