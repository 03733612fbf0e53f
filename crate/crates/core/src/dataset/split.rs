use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::bins::{BinnedOccurrence, FrequencyBin};
use crate::error::{Error, Result};
use crate::morpho::{AffixBundle, Derivation, Shape};

/// Lexicon setting: bases may be shared across splits, or must be disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Setting {
    Shared,
    Split,
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SHARED" => Ok(Setting::Shared),
            "SPLIT" => Ok(Setting::Split),
            _ => Err(Error::Parse(format!("unknown setting `{s}`"))),
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Setting::Shared => "SHARED",
            Setting::Split => "SPLIT",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Dev, Split::Test];
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "train" => Ok(Split::Train),
            "dev" => Ok(Split::Dev),
            "test" => Ok(Split::Test),
            _ => Err(Error::Parse(format!("unknown split `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRatios {
    pub train: f64,
    pub dev: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios {
            train: 0.6,
            dev: 0.2,
            test: 0.2,
        }
    }
}

impl SplitRatios {
    fn validate(&self) -> Result<[f64; 3]> {
        let r = [self.train, self.dev, self.test];
        if r.iter().any(|x| !(0.0..=1.0).contains(x)) || (r.iter().sum::<f64>() - 1.0).abs() > 1e-9
        {
            return Err(Error::InvalidInput(format!(
                "split ratios {r:?} must be in [0,1] and sum to 1"
            )));
        }
        Ok(r)
    }
}

/// One cloze item of the dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetItem {
    pub id: String,
    pub tokens: Vec<String>,
    pub d: usize,
    pub base: String,
    pub prefix: Option<String>,
    pub suffix: Option<String>,
    pub shape: Shape,
    pub bin: FrequencyBin,
    pub split: Split,
    pub setting: Setting,
}

impl DatasetItem {
    pub fn surface(&self) -> Option<String> {
        self.tokens.get(self.d).map(|t| t.to_lowercase())
    }

    pub fn bundle(&self) -> Result<AffixBundle> {
        AffixBundle::from_forms(self.prefix.as_deref(), self.suffix.as_deref())
    }

    /// Gold label in bundle notation (`un##able`, `anti`, `ness`).
    pub fn label(&self) -> String {
        match (&self.prefix, &self.suffix) {
            (Some(p), Some(s)) => format!("{p}##{s}"),
            (Some(a), None) | (None, Some(a)) => a.clone(),
            (None, None) => String::new(),
        }
    }

    pub fn derivation(&self) -> Result<Derivation> {
        let surface = self
            .surface()
            .ok_or_else(|| Error::SentenceWithoutDerivative(self.id.clone()))?;
        Ok(Derivation {
            surface,
            base: self.base.clone(),
            bundle: self.bundle()?,
        })
    }
}

/// Content hash of (tokens, d, surface), hex-encoded, 128 bits.
pub fn item_id(tokens: &[String], d: usize, surface: &str) -> String {
    let mut h = Sha256::new();
    for t in tokens {
        h.update(t.as_bytes());
        h.update([0x1f]);
    }
    h.update([0x1e]);
    h.update(d.to_le_bytes());
    h.update(surface.as_bytes());
    h.finalize()[..16]
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Achieved split shares for one (shape, bin) group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSplitReport {
    pub shape: Shape,
    pub bin: FrequencyBin,
    pub items: usize,
    pub bases: usize,
    pub shares: [f64; 3],
}

fn counts_for(n: usize, ratios: [f64; 3]) -> [usize; 3] {
    let train = (ratios[0] * n as f64).round() as usize;
    let dev = ((ratios[1] * n as f64).round() as usize).min(n - train);
    [train, dev, n - train - dev]
}

fn assign_shared(idx: &[usize], ratios: [f64; 3], rng: &mut ChaCha8Rng, out: &mut [Option<Split>]) {
    let mut order = idx.to_vec();
    order.shuffle(rng);
    let [train, dev, _] = counts_for(order.len(), ratios);
    for (k, i) in order.into_iter().enumerate() {
        out[i] = Some(if k < train {
            Split::Train
        } else if k < train + dev {
            Split::Dev
        } else {
            Split::Test
        });
    }
}

/// Greedy base partition: bases in decreasing item count (seeded shuffle
/// breaks count ties) go to the split furthest below its target share.
fn assign_by_base(
    idx: &[usize],
    items: &[BinnedOccurrence],
    ratios: [f64; 3],
    rng: &mut ChaCha8Rng,
    out: &mut [Option<Split>],
    group: &str,
) -> Result<()> {
    let mut by_base: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for &i in idx {
        by_base
            .entry(items[i].occurrence.base.as_str())
            .or_default()
            .push(i);
    }
    if by_base.len() < 3 {
        return Err(Error::TooFewBases {
            group: group.to_string(),
            found: by_base.len(),
        });
    }
    let mut bases: Vec<(&str, Vec<usize>)> = by_base.into_iter().collect();
    bases.shuffle(rng);
    bases.sort_by_key(|b| std::cmp::Reverse(b.1.len()));

    let mut filled = [0usize; 3];
    for (_, members) in bases {
        let total = (filled.iter().sum::<usize>() + members.len()) as f64;
        let (best, _) = (0..3)
            .map(|k| (k, ratios[k] * total - filled[k] as f64))
            .fold((0, f64::NEG_INFINITY), |acc, (k, deficit)| {
                if deficit > acc.1 + 1e-12 {
                    (k, deficit)
                } else {
                    acc
                }
            });
        filled[best] += members.len();
        for i in members {
            out[i] = Some(Split::ALL[best]);
        }
    }
    Ok(())
}

/// Splits each (shape, bin) group independently. SHARED shuffles items;
/// SPLIT partitions the group's bases so no base crosses splits. Item order
/// follows the input.
pub fn split(
    items: &[BinnedOccurrence],
    setting: Setting,
    ratios: SplitRatios,
    seed: u64,
) -> Result<(Vec<DatasetItem>, Vec<GroupSplitReport>)> {
    let ratios = ratios.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut groups: BTreeMap<(Shape, FrequencyBin), Vec<usize>> = BTreeMap::new();
    for (i, it) in items.iter().enumerate() {
        groups
            .entry((it.occurrence.shape, it.bin))
            .or_default()
            .push(i);
    }

    let mut assigned: Vec<Option<Split>> = vec![None; items.len()];
    let mut reports = Vec::new();
    for ((shape, bin), idx) in &groups {
        match setting {
            Setting::Shared => assign_shared(idx, ratios, &mut rng, &mut assigned),
            Setting::Split => assign_by_base(
                idx,
                items,
                ratios,
                &mut rng,
                &mut assigned,
                &format!("{bin}/{shape}"),
            )?,
        }
        let mut counts: HashMap<Split, usize> = HashMap::new();
        for &i in idx {
            *counts.entry(assigned[i].expect("assigned")).or_default() += 1;
        }
        let n = idx.len() as f64;
        let bases = idx
            .iter()
            .map(|&i| items[i].occurrence.base.as_str())
            .collect::<std::collections::BTreeSet<_>>()
            .len();
        reports.push(GroupSplitReport {
            shape: *shape,
            bin: *bin,
            items: idx.len(),
            bases,
            shares: Split::ALL.map(|s| counts.get(&s).copied().unwrap_or(0) as f64 / n),
        });
    }

    let out = items
        .iter()
        .zip(assigned)
        .map(|(it, s)| {
            let o = &it.occurrence;
            DatasetItem {
                id: item_id(&o.tokens, o.d, &o.surface),
                tokens: o.tokens.clone(),
                d: o.d,
                base: o.base.clone(),
                prefix: o.prefix.clone(),
                suffix: o.suffix.clone(),
                shape: o.shape,
                bin: it.bin,
                split: s.expect("every item assigned"),
                setting,
            }
        })
        .collect();
    Ok((out, reports))
}
