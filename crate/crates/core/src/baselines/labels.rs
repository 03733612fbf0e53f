use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::dataset::{ClozeRecord, DatasetItem};
use crate::error::{Error, Result};
use crate::morpho::{Lexicon, Shape};

/// Something that can be scored: an id and the shape selecting its labels.
pub trait Labeled {
    fn id(&self) -> &str;
    fn shape(&self) -> Shape;
}

impl Labeled for ClozeRecord {
    fn id(&self) -> &str {
        &self.id
    }
    fn shape(&self) -> Shape {
        self.shape
    }
}

impl Labeled for DatasetItem {
    fn id(&self) -> &str {
        &self.id
    }
    fn shape(&self) -> Shape {
        self.shape
    }
}

/// Eligible labels per shape, each list sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSpace {
    shapes: BTreeMap<Shape, Vec<String>>,
}

impl LabelSpace {
    pub fn new(shapes: BTreeMap<Shape, Vec<String>>) -> Result<Self> {
        let shapes: BTreeMap<Shape, Vec<String>> = shapes
            .into_iter()
            .map(|(s, l)| {
                (
                    s,
                    l.into_iter()
                        .collect::<BTreeSet<_>>()
                        .into_iter()
                        .collect::<Vec<_>>(),
                )
            })
            .filter(|(_, l)| !l.is_empty())
            .collect();
        if shapes.is_empty() {
            return Err(Error::InvalidInput("label space is empty".into()));
        }
        Ok(LabelSpace { shapes })
    }

    /// Prefixes for P, suffixes for S, and the bundles seen in `train` for PS.
    pub fn from_lexicon(lexicon: &Lexicon, train: &[DatasetItem]) -> Result<Self> {
        let mut shapes = BTreeMap::new();
        shapes.insert(
            Shape::P,
            lexicon
                .prefixes()
                .iter()
                .map(|a| a.form().to_string())
                .collect(),
        );
        shapes.insert(
            Shape::S,
            lexicon
                .suffixes()
                .iter()
                .map(|a| a.form().to_string())
                .collect(),
        );
        shapes.insert(
            Shape::PS,
            train
                .iter()
                .filter(|it| it.shape == Shape::PS)
                .map(DatasetItem::label)
                .collect(),
        );
        Self::new(shapes)
    }

    pub fn labels(&self, shape: Shape) -> Result<&[String]> {
        self.shapes
            .get(&shape)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::InvalidInput(format!("label space has no {shape} labels")))
    }

    pub fn shapes(&self) -> impl Iterator<Item = Shape> + '_ {
        self.shapes.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Shape, &[String])> {
        self.shapes.iter().map(|(s, l)| (*s, l.as_slice()))
    }
}
