use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{remove_stopwords, tokenize, FeatureMatrix, SparseVector, StopList};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::math;

/// Smoothed inverse document frequency `ln((1 + n) / (1 + df)) + 1`.
pub fn smoothed_idf(n_docs: usize, document_frequency: usize) -> f64 {
    math::ln((1.0 + n_docs as f64) / (1.0 + document_frequency as f64)) + 1.0
}

/// Training vocabulary: terms in first-seen order with document frequencies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "VocabularyRepr", into = "VocabularyRepr")]
pub struct Vocabulary {
    terms: Vec<String>,
    index: BTreeMap<String, usize>,
    document_frequency: Vec<usize>,
    n_train_docs: usize,
}

#[derive(Serialize, Deserialize)]
struct VocabularyRepr {
    terms: Vec<String>,
    document_frequency: Vec<usize>,
    n_train_docs: usize,
}

impl TryFrom<VocabularyRepr> for Vocabulary {
    type Error = Error;

    fn try_from(repr: VocabularyRepr) -> Result<Self> {
        if repr.terms.len() != repr.document_frequency.len() {
            return Err(Error::InvalidModel(format!(
                "{} terms but {} document frequencies",
                repr.terms.len(),
                repr.document_frequency.len()
            )));
        }
        if let Some(&df) = repr
            .document_frequency
            .iter()
            .find(|&&df| df == 0 || df > repr.n_train_docs)
        {
            return Err(Error::InvalidModel(format!(
                "document frequency {df} outside 1..={}",
                repr.n_train_docs
            )));
        }
        let mut index = BTreeMap::new();
        for (i, term) in repr.terms.iter().enumerate() {
            if index.insert(term.clone(), i).is_some() {
                return Err(Error::InvalidModel(format!("duplicate term `{term}`")));
            }
        }
        Ok(Self {
            terms: repr.terms,
            index,
            document_frequency: repr.document_frequency,
            n_train_docs: repr.n_train_docs,
        })
    }
}

impl From<Vocabulary> for VocabularyRepr {
    fn from(v: Vocabulary) -> Self {
        Self {
            terms: v.terms,
            document_frequency: v.document_frequency,
            n_train_docs: v.n_train_docs,
        }
    }
}

impl Vocabulary {
    fn build<'a, I, S>(docs: I) -> Self
    where
        I: IntoIterator<Item = &'a [S]>,
        S: AsRef<str> + 'a,
    {
        let mut terms: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut document_frequency: Vec<usize> = Vec::new();
        // Last document each term was counted in, so repeats within a
        // document add to df once.
        let mut last_doc: Vec<usize> = Vec::new();
        let mut n_train_docs = 0;
        for (d, tokens) in docs.into_iter().enumerate() {
            n_train_docs += 1;
            for token in tokens {
                let token = token.as_ref();
                match index.get(token) {
                    Some(&i) => {
                        if last_doc[i] != d {
                            last_doc[i] = d;
                            document_frequency[i] += 1;
                        }
                    }
                    None => {
                        index.insert(token.into(), terms.len());
                        terms.push(token.into());
                        document_frequency.push(1);
                        last_doc.push(d);
                    }
                }
            }
        }
        Self {
            terms,
            index,
            document_frequency,
            n_train_docs,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get(index).map(String::as_str)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn document_frequency(&self, index: usize) -> usize {
        self.document_frequency[index]
    }

    pub fn document_frequencies(&self) -> &[usize] {
        &self.document_frequency
    }

    pub fn n_train_docs(&self) -> usize {
        self.n_train_docs
    }
}

/// Fitted TF-IDF transformation with L2 row normalization.
///
/// Stop words never enter the vocabulary, so transforming drops them along
/// with every other unseen term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TfidfRepr", into = "TfidfRepr")]
pub struct TfidfModel {
    vocabulary: Vocabulary,
    idf: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TfidfRepr {
    vocabulary: Vocabulary,
    idf: Vec<f64>,
    normalize: bool,
}

impl TryFrom<TfidfRepr> for TfidfModel {
    type Error = Error;

    fn try_from(repr: TfidfRepr) -> Result<Self> {
        if !repr.normalize {
            return Err(Error::InvalidModel(
                "only L2-normalized models are supported".into(),
            ));
        }
        if repr.idf.len() != repr.vocabulary.len() {
            return Err(Error::InvalidModel(format!(
                "{} idf weights for {} terms",
                repr.idf.len(),
                repr.vocabulary.len()
            )));
        }
        let n = repr.vocabulary.n_train_docs();
        for (i, &w) in repr.idf.iter().enumerate() {
            let expected = smoothed_idf(n, repr.vocabulary.document_frequency(i));
            if (w - expected).abs() > 1e-12 {
                return Err(Error::InvalidModel(format!(
                    "idf of `{}` is {w}, expected {expected}",
                    repr.vocabulary.terms[i]
                )));
            }
        }
        Ok(Self {
            vocabulary: repr.vocabulary,
            idf: repr.idf,
        })
    }
}

impl From<TfidfModel> for TfidfRepr {
    fn from(m: TfidfModel) -> Self {
        Self {
            vocabulary: m.vocabulary,
            idf: m.idf,
            normalize: true,
        }
    }
}

impl TfidfModel {
    /// Fits on documents that are already tokenized and stop-word filtered.
    pub fn fit_tokens<'a, I, S>(docs: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [S]>,
        S: AsRef<str> + 'a,
    {
        let vocabulary = Vocabulary::build(docs);
        if vocabulary.n_train_docs == 0 {
            return Err(Error::Empty);
        }
        if vocabulary.is_empty() {
            return Err(Error::NoFeatures);
        }
        let n = vocabulary.n_train_docs;
        let idf = vocabulary
            .document_frequency
            .iter()
            .map(|&df| smoothed_idf(n, df))
            .collect();
        Ok(Self { vocabulary, idf })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn n_features(&self) -> usize {
        self.idf.len()
    }

    /// Tokenizes `text` and maps it to an L2-normalized TF-IDF vector.
    pub fn transform(&self, text: &str) -> SparseVector {
        self.transform_tokens(&tokenize(text))
    }

    /// Raw weights are `count * idf` over in-vocabulary tokens, then divided
    /// by their Euclidean norm. A document with no known tokens maps to the
    /// zero vector.
    pub fn transform_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> SparseVector {
        let mut columns: Vec<usize> = tokens
            .iter()
            .filter_map(|t| self.vocabulary.index_of(t.as_ref()))
            .collect();
        if columns.is_empty() {
            return SparseVector::zero();
        }
        columns.sort_unstable();
        let mut entries: Vec<(usize, f64)> = Vec::new();
        for c in columns {
            match entries.last_mut() {
                Some((last, count)) if *last == c => *count += 1.0,
                _ => entries.push((c, 1.0)),
            }
        }
        for (c, w) in &mut entries {
            *w *= self.idf[*c];
        }
        let norm = math::sqrt(entries.iter().map(|&(_, w)| w * w).sum());
        for (_, w) in &mut entries {
            *w /= norm;
        }
        SparseVector::from_sorted(entries)
    }

    pub fn transform_corpus(&self, corpus: &Corpus) -> FeatureMatrix {
        let rows = corpus.iter().map(|d| self.transform(d.text())).collect();
        FeatureMatrix::new(rows, self.n_features()).expect("columns come from the vocabulary")
    }

    /// Transforms pre-tokenized documents into a matrix.
    pub fn transform_all<'a, I, S>(&self, docs: I) -> FeatureMatrix
    where
        I: IntoIterator<Item = &'a [S]>,
        S: AsRef<str> + 'a,
    {
        let rows = docs.into_iter().map(|t| self.transform_tokens(t)).collect();
        FeatureMatrix::new(rows, self.n_features()).expect("columns come from the vocabulary")
    }
}

/// Fits vocabulary and IDF weights on `train` after stop-word removal.
pub fn fit_vectorizer(train: &Corpus, stoplist: &StopList) -> Result<TfidfModel> {
    let docs: Vec<Vec<String>> = train
        .iter()
        .map(|d| remove_stopwords(&tokenize(d.text()), stoplist))
        .collect();
    TfidfModel::fit_tokens(docs.iter().map(Vec::as_slice))
}
