//! Synthetic corpus with a planted context cue per affix label.
//!
//! Every derivative is immediately preceded by the cue word of its label
//! (with probability `1 - noise`, otherwise a random other cue), so context
//! carries learnable signal. Filler and cue words have three letters and can
//! never be analyzed as derivatives.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morpho::{analyze, derive, AffixBundle, AnalysisCaps, Lexicon};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub prefixes: Vec<String>,
    pub suffixes: Vec<String>,
    /// Number of prefix-suffix bundles, formed by pairing prefix `i` with
    /// suffix `i + 1`.
    pub bundles: usize,
    pub bases_per_label: usize,
    /// Occurrence counts cycled over each label's derivative types.
    pub frequencies: Vec<u64>,
    /// Probability that a sentence carries a wrong cue.
    pub noise: f64,
    pub fillers: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect();
        SynthConfig {
            prefixes: s(&[
                "anti", "counter", "de", "ex", "extra", "hyper", "inter", "mis", "non", "over",
                "post", "pre", "re", "semi", "sub", "un",
            ]),
            suffixes: s(&[
                "able", "al", "dom", "ee", "er", "ful", "hood", "ish", "ism", "ist", "ity", "ive",
                "less", "ly", "ment", "ness",
            ]),
            bundles: 16,
            bases_per_label: 8,
            frequencies: vec![1, 3, 5, 9],
            noise: 0.1,
            fillers: 200,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub lexicon: Lexicon,
    /// A WordPiece vocabulary from which `lexicon` can be rebuilt.
    pub vocab: Vec<String>,
    pub sentences: Vec<String>,
    /// Cue word per label.
    pub cues: BTreeMap<String, String>,
}

const CONSONANTS: &[u8] = b"bdfgklmnprstvz";
const VOWELS: &[u8] = b"aeiou";

fn pick(rng: &mut ChaCha8Rng, set: &[u8]) -> char {
    set[rng.gen_range(0..set.len())] as char
}

/// Three-letter CVC words, distinct from each other and from `taken`.
fn short_words(rng: &mut ChaCha8Rng, n: usize, taken: &mut BTreeSet<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let w: String = [
            pick(rng, CONSONANTS),
            pick(rng, VOWELS),
            pick(rng, CONSONANTS),
        ]
        .iter()
        .collect();
        if taken.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

pub fn generate(cfg: &SynthConfig, seed: u64) -> Result<SynthCorpus> {
    if cfg.prefixes.is_empty()
        || cfg.suffixes.is_empty()
        || cfg.frequencies.is_empty()
        || cfg.bases_per_label == 0
    {
        return Err(Error::InvalidInput(
            "synthetic corpus needs affixes, bases and frequencies".into(),
        ));
    }
    if !(0.0..=1.0).contains(&cfg.noise) {
        return Err(Error::InvalidInput("noise must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut bundles: Vec<AffixBundle> = Vec::new();
    for p in &cfg.prefixes {
        bundles.push(AffixBundle::from_forms(Some(p), None)?);
    }
    for s in &cfg.suffixes {
        bundles.push(AffixBundle::from_forms(None, Some(s))?);
    }
    for i in 0..cfg.bundles {
        let p = &cfg.prefixes[i % cfg.prefixes.len()];
        let s = &cfg.suffixes[(i + 1) % cfg.suffixes.len()];
        bundles.push(AffixBundle::from_forms(Some(p), Some(s))?);
    }
    bundles.sort();
    bundles.dedup();

    let n_bases = bundles.len() * cfg.bases_per_label;
    let mut base_set = BTreeSet::new();
    while base_set.len() < n_bases {
        let w: String = (0..5)
            .map(|i| {
                if i % 2 == 0 {
                    pick(&mut rng, CONSONANTS)
                } else {
                    pick(&mut rng, VOWELS)
                }
            })
            .collect();
        if !cfg.prefixes.iter().chain(&cfg.suffixes).any(|a| *a == w) {
            base_set.insert(w);
        }
    }
    let mut bases: Vec<String> = base_set.iter().cloned().collect();
    bases.shuffle(&mut rng);

    let lexicon = Lexicon::from_forms(
        cfg.prefixes.iter().map(String::as_str),
        cfg.suffixes.iter().map(String::as_str),
        bases.iter().map(String::as_str),
        std::iter::empty(),
    )?;

    let mut taken = BTreeSet::new();
    let cue_list = short_words(&mut rng, bundles.len(), &mut taken);
    let fillers = short_words(&mut rng, cfg.fillers.max(1), &mut taken);
    let cues: BTreeMap<String, String> = bundles
        .iter()
        .map(AffixBundle::label)
        .zip(cue_list.iter().cloned())
        .collect();

    // Derivative types whose preferred analysis is the planted one.
    let mut mentions: Vec<(String, String)> = Vec::new();
    let mut pool = bases.iter();
    for bundle in &bundles {
        let label = bundle.label();
        let mut kept = 0;
        while kept < cfg.bases_per_label {
            let Some(base) = pool.next() else { break };
            let Some(surface) = derive(base, bundle).into_iter().next() else {
                continue;
            };
            match analyze(&surface, &lexicon, AnalysisCaps::default()) {
                Some(d) if d.base == *base && d.bundle == *bundle => {}
                _ => continue,
            }
            let f = cfg.frequencies[kept % cfg.frequencies.len()];
            mentions.extend(std::iter::repeat_n((surface, label.clone()), f as usize));
            kept += 1;
        }
    }
    mentions.shuffle(&mut rng);

    let sentences = mentions
        .iter()
        .map(|(surface, label)| {
            let cue = if rng.gen_bool(cfg.noise) {
                cue_list.choose(&mut rng).expect("cues exist")
            } else {
                &cues[label]
            };
            let mut words: Vec<&str> = (0..rng.gen_range(5..10))
                .map(|_| fillers.choose(&mut rng).unwrap().as_str())
                .collect();
            words.push(cue);
            words.push(surface);
            words.extend(
                (0..rng.gen_range(4..9)).map(|_| fillers.choose(&mut rng).unwrap().as_str()),
            );
            format!("{} .", words.join(" "))
        })
        .collect();

    let mut vocab: Vec<String> = vec!["[UNK]".into(), "-".into(), ".".into()];
    for c in b'a'..=b'z' {
        vocab.push((c as char).to_string());
        vocab.push(format!("##{}", c as char));
    }
    vocab.extend(cfg.prefixes.iter().cloned());
    vocab.extend(cfg.suffixes.iter().map(|s| format!("##{s}")));
    vocab.extend(base_set.iter().cloned());
    vocab.extend(base_set.iter().map(|b| format!("##{b}")));
    vocab.extend(taken.iter().cloned());
    let mut seen = BTreeSet::new();
    vocab.retain(|t| seen.insert(t.clone()));

    Ok(SynthCorpus {
        lexicon,
        vocab,
        sentences,
        cues,
    })
}
