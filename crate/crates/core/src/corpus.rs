//! Labeled abstract corpora and random train/test splitting.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{math, seed};

/// Binary screening label: `0` for exclude (not an RCT), `1` for include.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Label {
    Negative = 0,
    Positive = 1,
}

impl Label {
    pub const fn from_bool(positive: bool) -> Self {
        if positive {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub const fn is_positive(self) -> bool {
        matches!(self, Label::Positive)
    }

    pub const fn as_u8(self) -> u8 {
        self as u8
    }

    /// Index into per-class arrays.
    pub const fn index(self) -> usize {
        self as usize
    }

    /// The `{-1, +1}` sign used by margin classifiers.
    pub const fn sign(self) -> f64 {
        match self {
            Label::Negative => -1.0,
            Label::Positive => 1.0,
        }
    }
}

impl TryFrom<u8> for Label {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            0 => Ok(Label::Negative),
            1 => Ok(Label::Positive),
            other => Err(Error::InvalidLabel(other.to_string())),
        }
    }
}

impl From<Label> for u8 {
    fn from(label: Label) -> u8 {
        label.as_u8()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// One abstract.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    id: String,
    text: String,
    label: Option<Label>,
}

impl Document {
    /// Fails when `text` is empty after trimming whitespace.
    pub fn new(
        id: impl Into<String>,
        text: impl Into<String>,
        label: Option<Label>,
    ) -> Result<Self> {
        let id = id.into();
        let text = text.into();
        if text.trim().is_empty() {
            return Err(Error::EmptyText(id));
        }
        Ok(Self { id, text, label })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn label(&self) -> Option<Label> {
        self.label
    }
}

/// An ordered collection of documents with unique ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for doc in &documents {
            if !seen.insert(doc.id()) {
                return Err(Error::DuplicateId(doc.id.clone()));
            }
        }
        Ok(Self { documents })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Document> {
        self.documents.iter()
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn labeled_count(&self) -> usize {
        self.documents.iter().filter(|d| d.label.is_some()).count()
    }

    pub fn positive_count(&self) -> usize {
        self.documents
            .iter()
            .filter(|d| d.label == Some(Label::Positive))
            .count()
    }

    /// Fraction of labeled documents with label 1, or `None` when nothing is
    /// labeled.
    pub fn positive_rate(&self) -> Option<f64> {
        let labeled = self.labeled_count();
        (labeled > 0).then(|| self.positive_count() as f64 / labeled as f64)
    }

    pub fn is_fully_labeled(&self) -> bool {
        self.documents.iter().all(|d| d.label.is_some())
    }

    /// All labels in document order; fails on the first unlabeled document.
    pub fn labels(&self) -> Result<Vec<Label>> {
        self.documents
            .iter()
            .map(|d| d.label.ok_or_else(|| Error::Unlabeled(d.id.clone())))
            .collect()
    }

    /// Uniform random partition into train and test halves.
    ///
    /// The test half holds `ceil(len * test_fraction)` documents. Both halves
    /// keep the corpus order of their documents.
    pub fn split(&self, test_fraction: f64, seed: u64) -> Result<SplitPair> {
        self.labels()?;
        let (train, test) = split_indices(self.len(), test_fraction, seed)?;
        let pick = |idx: &[usize]| Corpus {
            documents: idx.iter().map(|&i| self.documents[i].clone()).collect(),
        };
        Ok(SplitPair {
            train: pick(&train),
            test: pick(&test),
        })
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a Document;
    type IntoIter = core::slice::Iter<'a, Document>;

    fn into_iter(self) -> Self::IntoIter {
        self.documents.iter()
    }
}

/// A train/test partition of a parent corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPair {
    pub train: Corpus,
    pub test: Corpus,
}

/// Size of the test half: `ceil(n * test_fraction)`.
///
/// Products within 1e-9 of an integer are snapped to it first, so that for
/// example `10 * 0.7` gives 7 rather than 8.
pub fn test_size(n: usize, test_fraction: f64) -> usize {
    let raw = n as f64 * test_fraction;
    let nearest = math::round(raw);
    if (raw - nearest).abs() <= 1e-9 {
        nearest as usize
    } else {
        math::ceil(raw) as usize
    }
}

/// Seeded uniform partition of `0..n` into sorted `(train, test)` index sets.
pub fn split_indices(n: usize, test_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::TestFraction(test_fraction));
    }
    let n_test = test_size(n, test_fraction);
    if n_test == 0 || n_test >= n {
        return Err(Error::SplitTooSmall {
            n,
            fraction: test_fraction,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seed::rng(seed));
    let mut test = order[..n_test].to_vec();
    let mut train = order[n_test..].to_vec();
    test.sort_unstable();
    train.sort_unstable();
    Ok((train, test))
}
