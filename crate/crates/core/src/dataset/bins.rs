use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fmt::Write as _;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::extract::Occurrence;
use crate::error::{Error, Result};
use crate::morpho::Shape;

/// Logarithmic frequency bins over `[1, 128)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FrequencyBin {
    B1,
    B2,
    B3,
    B4,
    B5,
    B6,
    B7,
}

impl FrequencyBin {
    pub const ALL: [FrequencyBin; 7] = [
        FrequencyBin::B1,
        FrequencyBin::B2,
        FrequencyBin::B3,
        FrequencyBin::B4,
        FrequencyBin::B5,
        FrequencyBin::B6,
        FrequencyBin::B7,
    ];

    /// `[2^(k-1), 2^k)` for bin `Bk`.
    pub fn range(self) -> Range<u64> {
        let k = self as u32;
        (1u64 << k)..(1u64 << (k + 1))
    }

    pub fn of(frequency: u64) -> Option<FrequencyBin> {
        if frequency == 0 || frequency >= 128 {
            return None;
        }
        Some(Self::ALL[(63 - frequency.leading_zeros()) as usize])
    }

    pub fn as_str(self) -> &'static str {
        ["B1", "B2", "B3", "B4", "B5", "B6", "B7"][self as usize]
    }
}

impl fmt::Display for FrequencyBin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FrequencyBin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown frequency bin `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinnedOccurrence {
    #[serde(flatten)]
    pub occurrence: Occurrence,
    pub frequency: u64,
    pub bin: FrequencyBin,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeCounts {
    /// distinct derivatives
    pub n_d: usize,
    /// context sentences
    pub n_s: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinStatsRow {
    pub bin: FrequencyBin,
    /// Mean frequency per billion corpus tokens over the bin's derivatives.
    pub mu_f: f64,
    pub shapes: BTreeMap<Shape, ShapeCounts>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinStats {
    pub corpus_tokens: u64,
    pub rows: Vec<BinStatsRow>,
}

impl BinStats {
    pub fn compute(items: &[BinnedOccurrence], corpus_tokens: u64) -> Self {
        let mut types: BTreeMap<FrequencyBin, BTreeMap<Shape, BTreeSet<&str>>> = BTreeMap::new();
        let mut sentences: BTreeMap<(FrequencyBin, Shape), usize> = BTreeMap::new();
        let mut freq_of: HashMap<&str, u64> = HashMap::new();
        for it in items {
            let o = &it.occurrence;
            types
                .entry(it.bin)
                .or_default()
                .entry(o.shape)
                .or_default()
                .insert(&o.surface);
            *sentences.entry((it.bin, o.shape)).or_default() += 1;
            freq_of.insert(&o.surface, it.frequency);
        }
        let norm = if corpus_tokens == 0 {
            0.0
        } else {
            1e9 / corpus_tokens as f64
        };
        let rows = FrequencyBin::ALL
            .into_iter()
            .map(|bin| {
                let by_shape = types.get(&bin);
                let shapes = Shape::ALL
                    .into_iter()
                    .map(|sh| {
                        let n_d = by_shape.and_then(|m| m.get(&sh)).map_or(0, BTreeSet::len);
                        let n_s = sentences.get(&(bin, sh)).copied().unwrap_or(0);
                        (sh, ShapeCounts { n_d, n_s })
                    })
                    .collect();
                let all: Vec<u64> = by_shape
                    .into_iter()
                    .flat_map(|m| m.values().flatten())
                    .map(|s| freq_of[s])
                    .collect();
                let mu_f = if all.is_empty() {
                    0.0
                } else {
                    all.iter().sum::<u64>() as f64 / all.len() as f64 * norm
                };
                BinStatsRow { bin, mu_f, shapes }
            })
            .collect();
        BinStats {
            corpus_tokens,
            rows,
        }
    }

    /// TSV with the layout of a per-bin summary table: bin, μ_f, then n_d and
    /// n_s for P, S and PS.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("bin\tmu_f\tP_n_d\tP_n_s\tS_n_d\tS_n_s\tPS_n_d\tPS_n_s\n");
        for r in &self.rows {
            let _ = write!(out, "{}\t{:.3}", r.bin, r.mu_f);
            for sh in Shape::ALL {
                let c = r.shapes.get(&sh).copied().unwrap_or_default();
                let _ = write!(out, "\t{}\t{}", c.n_d, c.n_s);
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Default)]
pub struct BinnedSet {
    pub items: Vec<BinnedOccurrence>,
    /// Frequency per derivative type, over all types including excluded ones.
    pub frequencies: BTreeMap<String, u64>,
    pub excluded_types: usize,
    pub excluded_occurrences: usize,
}

impl BinnedSet {
    pub fn bin_of(&self, surface: &str) -> Option<FrequencyBin> {
        self.frequencies
            .get(surface)
            .copied()
            .and_then(FrequencyBin::of)
    }
}

/// Frequency is the number of context sentences per distinct derivative
/// surface. Types with frequency 128 or more are dropped.
pub fn bin_occurrences(occurrences: Vec<Occurrence>) -> BinnedSet {
    let mut frequencies: BTreeMap<String, u64> = BTreeMap::new();
    for o in &occurrences {
        *frequencies.entry(o.surface.clone()).or_default() += 1;
    }
    let mut set = BinnedSet {
        excluded_types: frequencies
            .values()
            .filter(|&&f| FrequencyBin::of(f).is_none())
            .count(),
        ..Default::default()
    };
    for o in occurrences {
        let f = frequencies[&o.surface];
        match FrequencyBin::of(f) {
            Some(bin) => set.items.push(BinnedOccurrence {
                occurrence: o,
                frequency: f,
                bin,
            }),
            None => set.excluded_occurrences += 1,
        }
    }
    set.frequencies = frequencies;
    set
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries() {
        assert_eq!(FrequencyBin::of(0), None);
        assert_eq!(FrequencyBin::of(1), Some(FrequencyBin::B1));
        assert_eq!(FrequencyBin::of(2), Some(FrequencyBin::B2));
        assert_eq!(FrequencyBin::of(3), Some(FrequencyBin::B2));
        assert_eq!(FrequencyBin::of(4), Some(FrequencyBin::B3));
        assert_eq!(FrequencyBin::of(127), Some(FrequencyBin::B7));
        assert_eq!(FrequencyBin::of(128), None);
    }

    #[test]
    fn ranges_partition_1_to_128() {
        let mut next = 1;
        for b in FrequencyBin::ALL {
            let r = b.range();
            assert_eq!(r.start, next);
            for f in r.clone() {
                assert_eq!(FrequencyBin::of(f), Some(b));
            }
            next = r.end;
        }
        assert_eq!(next, 128);
    }

    fn occ(surface: &str, shape: Shape) -> Occurrence {
        Occurrence {
            tokens: vec![surface.to_string()],
            d: 0,
            surface: surface.into(),
            base: "base".into(),
            prefix: matches!(shape, Shape::P | Shape::PS).then(|| "un".into()),
            suffix: matches!(shape, Shape::S | Shape::PS).then(|| "able".into()),
            shape,
        }
    }

    #[test]
    fn planted_counts() {
        let mut occs = vec![occ("a", Shape::P)];
        occs.extend((0..5).map(|_| occ("b", Shape::P)));
        occs.extend((0..200).map(|_| occ("c", Shape::S)));
        let set = bin_occurrences(occs);
        assert_eq!(set.bin_of("a"), Some(FrequencyBin::B1));
        assert_eq!(set.bin_of("b"), Some(FrequencyBin::B3));
        assert_eq!(set.bin_of("c"), None);
        assert_eq!(set.items.len(), 6);
        assert_eq!(set.excluded_types, 1);
        assert_eq!(set.excluded_occurrences, 200);
    }

    #[test]
    fn stats_columns() {
        let mut occs = vec![occ("a", Shape::P), occ("x", Shape::S)];
        occs.extend((0..3).map(|_| occ("b", Shape::P)));
        let set = bin_occurrences(occs);
        let stats = BinStats::compute(&set.items, 1_000_000_000);
        let b1 = &stats.rows[0];
        assert_eq!(b1.shapes[&Shape::P], ShapeCounts { n_d: 1, n_s: 1 });
        assert_eq!(b1.shapes[&Shape::S], ShapeCounts { n_d: 1, n_s: 1 });
        assert!((b1.mu_f - 1.0).abs() < 1e-12);
        let b2 = &stats.rows[1];
        assert_eq!(b2.shapes[&Shape::P], ShapeCounts { n_d: 1, n_s: 3 });
        assert!((b2.mu_f - 3.0).abs() < 1e-12);
        let tsv = stats.to_tsv();
        assert!(tsv
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("B1\t1.000\t1\t1\t1\t1\t0\t0"));
        assert_eq!(tsv.lines().count(), 8);
    }
}
