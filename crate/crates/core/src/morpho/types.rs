use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AffixKind {
    Prefix,
    Suffix,
}

/// A derivational affix. The form never carries the `##` marker; the kind
/// encodes the position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Affix {
    kind: AffixKind,
    form: String,
}

impl Affix {
    pub fn new(kind: AffixKind, form: &str) -> Result<Self> {
        let form = form.strip_prefix("##").unwrap_or(form);
        if form.is_empty() || !form.chars().all(|c| c.is_ascii_lowercase()) {
            return Err(Error::InvalidInput(format!(
                "affix form `{form}` must be non-empty lowercase alphabetic"
            )));
        }
        Ok(Affix {
            kind,
            form: form.to_string(),
        })
    }

    pub fn prefix(form: &str) -> Result<Self> {
        Self::new(AffixKind::Prefix, form)
    }

    pub fn suffix(form: &str) -> Result<Self> {
        Self::new(AffixKind::Suffix, form)
    }

    pub fn kind(&self) -> AffixKind {
        self.kind
    }

    pub fn form(&self) -> &str {
        &self.form
    }

    /// The affix as it appears in a WordPiece vocabulary.
    pub fn vocab_token(&self) -> String {
        match self.kind {
            AffixKind::Prefix => self.form.clone(),
            AffixKind::Suffix => format!("##{}", self.form),
        }
    }
}

impl fmt::Display for Affix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.form)
    }
}

/// Number and position of affixes in a derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Shape {
    P,
    S,
    PS,
}

impl Shape {
    pub const ALL: [Shape; 3] = [Shape::P, Shape::S, Shape::PS];

    pub fn as_str(self) -> &'static str {
        match self {
            Shape::P => "P",
            Shape::S => "S",
            Shape::PS => "PS",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "P" => Ok(Shape::P),
            "S" => Ok(Shape::S),
            "PS" => Ok(Shape::PS),
            _ => Err(Error::Parse(format!("unknown shape `{s}`"))),
        }
    }
}

/// At most one prefix and at most one suffix, at least one present.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffixBundle {
    prefix: Option<Affix>,
    suffix: Option<Affix>,
}

impl AffixBundle {
    pub fn new(prefix: Option<Affix>, suffix: Option<Affix>) -> Result<Self> {
        if prefix.is_none() && suffix.is_none() {
            return Err(Error::InvalidInput(
                "affix bundle needs a prefix or a suffix".into(),
            ));
        }
        if prefix.as_ref().is_some_and(|p| p.kind != AffixKind::Prefix)
            || suffix.as_ref().is_some_and(|s| s.kind != AffixKind::Suffix)
        {
            return Err(Error::InvalidInput(
                "affix kind does not match its slot".into(),
            ));
        }
        Ok(AffixBundle { prefix, suffix })
    }

    pub fn from_forms(prefix: Option<&str>, suffix: Option<&str>) -> Result<Self> {
        Self::new(
            prefix.map(Affix::prefix).transpose()?,
            suffix.map(Affix::suffix).transpose()?,
        )
    }

    pub fn prefix_only(prefix: Affix) -> Result<Self> {
        Self::new(Some(prefix), None)
    }

    pub fn suffix_only(suffix: Affix) -> Result<Self> {
        Self::new(None, Some(suffix))
    }

    pub fn prefix(&self) -> Option<&Affix> {
        self.prefix.as_ref()
    }

    pub fn suffix(&self) -> Option<&Affix> {
        self.suffix.as_ref()
    }

    pub fn shape(&self) -> Shape {
        match (&self.prefix, &self.suffix) {
            (Some(_), Some(_)) => Shape::PS,
            (Some(_), None) => Shape::P,
            _ => Shape::S,
        }
    }

    pub fn affix_count(&self) -> usize {
        self.prefix.is_some() as usize + self.suffix.is_some() as usize
    }

    /// `un##able` for a prefix-suffix bundle, otherwise the bare affix form.
    pub fn label(&self) -> String {
        match (&self.prefix, &self.suffix) {
            (Some(p), Some(s)) => format!("{}##{}", p.form, s.form),
            (Some(p), None) => p.form.clone(),
            (None, Some(s)) => s.form.clone(),
            (None, None) => unreachable!("bundle invariant"),
        }
    }

    /// Inverse of [`label`](Self::label); the shape disambiguates bare forms.
    pub fn from_label(label: &str, shape: Shape) -> Result<Self> {
        match shape {
            Shape::P => Self::from_forms(Some(label), None),
            Shape::S => Self::from_forms(None, Some(label)),
            Shape::PS => {
                let (p, s) = label.split_once("##").ok_or_else(|| {
                    Error::Parse(format!("`{label}` is not a prefix##suffix label"))
                })?;
                Self::from_forms(Some(p), Some(s))
            }
        }
    }
}

impl fmt::Display for AffixBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A surface word decomposed into a base and an affix bundle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub surface: String,
    pub base: String,
    pub bundle: AffixBundle,
}

impl Derivation {
    pub fn shape(&self) -> Shape {
        self.bundle.shape()
    }
}
