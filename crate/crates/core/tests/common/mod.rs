#![allow(dead_code)]

use derivkit::dataset::{
    bin_occurrences, extract, ingest_reader, split, DatasetItem, FilterConfig, Setting, SplitRatios,
};
use derivkit::morpho::{AnalysisCaps, Lexicon};
use derivkit::resources::{default_prefixes, default_suffixes, english_stopwords};
use derivkit::synth::{generate, SynthConfig, SynthCorpus};
use derivkit::tokenizer::Vocab;

pub const GOLDEN_BASES: &[&str] = &[
    "applicable",
    "wear",
    "google",
    "happy",
    "walk",
    "swim",
    "bake",
    "boxing",
    "virus",
    "stone",
    "hope",
    "nation",
    "kind",
    "friend",
    "legal",
    "child",
    "modern",
    "care",
    "fill",
    "read",
    "drink",
    "teach",
    "power",
    "dark",
    "music",
    "employ",
    "king",
    "active",
    "market",
    "attack",
    "school",
    "game",
    "star",
    "pure",
    "stop",
    "beauty",
];

/// (word, base, prefix, suffix), each checked by hand.
pub const GOLDEN: &[(&str, &str, Option<&str>, Option<&str>)] = &[
    ("applicability", "applicable", None, Some("ity")),
    ("unwearable", "wear", Some("un"), Some("able")),
    ("ungooglable", "google", Some("un"), Some("able")),
    ("ungoogleable", "google", Some("un"), Some("able")),
    ("happiness", "happy", None, Some("ness")),
    ("unhappiness", "happy", Some("un"), Some("ness")),
    ("walker", "walk", None, Some("er")),
    ("swimmer", "swim", None, Some("er")),
    ("baker", "bake", None, Some("er")),
    ("antiboxing", "boxing", Some("anti"), None),
    ("antivirus", "virus", Some("anti"), None),
    ("anti-virus", "virus", Some("anti"), None),
    ("stoneless", "stone", None, Some("less")),
    ("hopeful", "hope", None, Some("ful")),
    ("hopeless", "hope", None, Some("less")),
    ("national", "nation", None, Some("al")),
    ("kindness", "kind", None, Some("ness")),
    ("friendly", "friend", None, Some("ly")),
    ("unfriendly", "friend", Some("un"), Some("ly")),
    ("legalize", "legal", None, Some("ize")),
    ("childhood", "child", None, Some("hood")),
    ("childish", "child", None, Some("ish")),
    ("modernism", "modern", None, Some("ism")),
    ("modernist", "modern", None, Some("ist")),
    ("modernize", "modern", None, Some("ize")),
    ("careful", "care", None, Some("ful")),
    ("careless", "care", None, Some("less")),
    ("refill", "fill", Some("re"), None),
    ("reread", "read", Some("re"), None),
    ("drinkable", "drink", None, Some("able")),
    ("undrinkable", "drink", Some("un"), Some("able")),
    ("teacher", "teach", None, Some("er")),
    ("powerful", "power", None, Some("ful")),
    ("powerless", "power", None, Some("less")),
    ("darkness", "dark", None, Some("ness")),
    ("musical", "music", None, Some("al")),
    ("musician", "music", None, Some("ian")),
    ("employee", "employ", None, Some("ee")),
    ("employer", "employ", None, Some("er")),
    ("employment", "employ", None, Some("ment")),
    ("kingdom", "king", None, Some("dom")),
    ("overactive", "active", Some("over"), None),
    ("hyperactive", "active", Some("hyper"), None),
    ("supermarket", "market", Some("super"), None),
    ("counterattack", "attack", Some("counter"), None),
    ("preschool", "school", Some("pre"), None),
    ("pregame", "game", Some("pre"), None),
    ("superstar", "star", Some("super"), None),
    ("purity", "pure", None, Some("ity")),
    ("beautiful", "beauty", None, Some("ful")),
];

pub fn golden_lexicon() -> Lexicon {
    let p = default_prefixes();
    let s = default_suffixes();
    let sw = english_stopwords();
    Lexicon::from_forms(
        p.iter().map(String::as_str),
        s.iter().map(String::as_str),
        GOLDEN_BASES.iter().copied(),
        sw.iter().map(String::as_str),
    )
    .expect("golden lexicon")
}

pub fn mini_vocab() -> Vocab {
    let tokens = [
        "[UNK]", "-", "un", "una", "re", "anti", "wear", "allowed", "all", "box", "##llo", "##wed",
        "##wear", "##able", "##all", "##owed", "##ing", "##er", "##s",
    ];
    Vocab::new(tokens.iter().map(|s| s.to_string()).collect(), "[UNK]").expect("mini vocab")
}

/// Synthetic corpus run through ingest, extraction, binning and splitting.
pub fn synth_dataset(seed: u64, setting: Setting) -> (SynthCorpus, Vec<DatasetItem>) {
    let corpus = generate(&SynthConfig::default(), seed).expect("synthetic corpus");
    let text = corpus.sentences.join("\n");
    let mut sentences = Vec::new();
    ingest_reader(text.as_bytes(), &FilterConfig::default(), |s| {
        sentences.push(s)
    })
    .expect("ingest");
    let (occ, _) = extract(&sentences, &corpus.lexicon, AnalysisCaps::default());
    let binned = bin_occurrences(occ);
    let (items, _) = split(&binned.items, setting, SplitRatios::default(), seed).expect("split");
    (corpus, items)
}
