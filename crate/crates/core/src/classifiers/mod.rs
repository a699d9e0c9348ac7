//! The four screening algorithms.
//!
//! * `nuclear` labels everything 0.
//! * `basic` labels a document 1 iff it contains the token `rct` or
//!   `randomized`.
//! * `bayes` is multinomial Naive Bayes over TF-IDF weights.
//! * `svm` is an L2-regularized hinge-loss linear SVM with optional
//!   inverse-frequency class weights, trained by dual coordinate descent.

mod naive_bayes;
mod svm;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

pub use naive_bayes::{nb_fit, NaiveBayesModel, NbPrediction};
pub use svm::{
    balanced_class_weights, dual_objective, projected_gradient_violations, solve_dual, svm_fit,
    svm_fit_traced, DualSolution, SolverTrace, SvmModel, SvmParams,
};

use crate::corpus::{Corpus, Label};
use crate::error::{Error, Result};
use crate::textproc::{fit_vectorizer, tokenize, StopList, TfidfModel};

/// Screening algorithm. The declaration order is the reporting order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Nuclear,
    Basic,
    Bayes,
    Svm,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 4] = [
        ClassifierKind::Nuclear,
        ClassifierKind::Basic,
        ClassifierKind::Bayes,
        ClassifierKind::Svm,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            ClassifierKind::Nuclear => "nuclear",
            ClassifierKind::Basic => "basic",
            ClassifierKind::Bayes => "bayes",
            ClassifierKind::Svm => "svm",
        }
    }

    /// Whether the algorithm learns parameters from TF-IDF features.
    pub const fn is_learned(self) -> bool {
        matches!(self, ClassifierKind::Bayes | ClassifierKind::Svm)
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_lowercase();
        ClassifierKind::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .ok_or_else(|| Error::InvalidParameter(alloc::format!("unknown algorithm `{s}`")))
    }
}

/// Always 0.
pub fn nuclear_predict(_text: &str) -> Label {
    Label::Negative
}

/// 1 iff the tokenized text contains `rct` or `randomized`.
pub fn basic_predict(text: &str) -> Label {
    basic_predict_tokens(&tokenize(text))
}

/// [`basic_predict`] over tokens from [`tokenize`], before stop-word removal.
pub fn basic_predict_tokens<S: AsRef<str>>(tokens: &[S]) -> Label {
    Label::from_bool(
        tokens
            .iter()
            .any(|t| matches!(t.as_ref(), "rct" | "randomized")),
    )
}

/// Hyperparameters for the learned classifiers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingParams {
    /// Naive Bayes additive smoothing.
    pub alpha: f64,
    pub svm: SvmParams,
}

impl Default for TrainingParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            svm: SvmParams::default(),
        }
    }
}

impl TrainingParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        self.svm.validate()
    }
}

/// Learned parameters of a [`TrainedModel`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ModelParameters {
    None,
    Bayes(NaiveBayesModel),
    Svm(SvmModel),
}

/// One classification with its score: the SVM decision value, the Naive
/// Bayes posterior of label 1, or the label itself for baselines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    pub label: Label,
    pub score: f64,
}

/// A classifier ready to label raw abstracts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    kind: ClassifierKind,
    tfidf: Option<TfidfModel>,
    parameters: ModelParameters,
}

impl TrainedModel {
    /// Fits `kind` on a fully labeled corpus containing both classes.
    pub fn fit(
        kind: ClassifierKind,
        corpus: &Corpus,
        stoplist: &StopList,
        params: &TrainingParams,
    ) -> Result<Self> {
        params.validate()?;
        let labels = corpus.labels()?;
        require_both_classes(&labels)?;
        if !kind.is_learned() {
            return Ok(Self::baseline(kind));
        }
        let tfidf = fit_vectorizer(corpus, stoplist)?;
        let x = tfidf.transform_corpus(corpus);
        let parameters = match kind {
            ClassifierKind::Bayes => ModelParameters::Bayes(nb_fit(&x, &labels, params.alpha)?),
            _ => ModelParameters::Svm(svm_fit(&x, &labels, &params.svm)?),
        };
        Ok(Self {
            kind,
            tfidf: Some(tfidf),
            parameters,
        })
    }

    /// A parameter-free `nuclear` or `basic` model.
    ///
    /// # Panics
    /// If `kind` is a learned classifier.
    pub fn baseline(kind: ClassifierKind) -> Self {
        assert!(!kind.is_learned(), "{kind} needs training");
        Self {
            kind,
            tfidf: None,
            parameters: ModelParameters::None,
        }
    }

    /// Assembles a model from parts, checking that they agree.
    pub fn from_parts(
        kind: ClassifierKind,
        tfidf: Option<TfidfModel>,
        parameters: ModelParameters,
    ) -> Result<Self> {
        let model = Self {
            kind,
            tfidf,
            parameters,
        };
        model.check()?;
        Ok(model)
    }

    /// Consistency of kind, vectorizer and parameter dimensions.
    pub fn check(&self) -> Result<()> {
        let n_features = self.tfidf.as_ref().map(TfidfModel::n_features);
        let ok = match (&self.parameters, n_features) {
            (ModelParameters::None, None) => !self.kind.is_learned(),
            (ModelParameters::Bayes(nb), Some(n)) => {
                self.kind == ClassifierKind::Bayes && nb.n_features() == n
            }
            (ModelParameters::Svm(svm), Some(n)) => {
                self.kind == ClassifierKind::Svm && svm.n_features() == n
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidModel(alloc::format!(
                "parameters do not match a {} model",
                self.kind
            )))
        }
    }

    pub fn kind(&self) -> ClassifierKind {
        self.kind
    }

    pub fn tfidf(&self) -> Option<&TfidfModel> {
        self.tfidf.as_ref()
    }

    pub fn parameters(&self) -> &ModelParameters {
        &self.parameters
    }

    pub fn predict(&self, text: &str) -> Prediction {
        let baseline = |label: Label| Prediction {
            label,
            score: f64::from(label.as_u8()),
        };
        match (&self.parameters, &self.tfidf) {
            (ModelParameters::Bayes(nb), Some(tfidf)) => {
                let p = nb.predict(&tfidf.transform(text));
                Prediction {
                    label: p.label,
                    score: p.posterior[1],
                }
            }
            (ModelParameters::Svm(svm), Some(tfidf)) => {
                let (label, decision) = svm.predict(&tfidf.transform(text));
                Prediction {
                    label,
                    score: decision,
                }
            }
            _ if self.kind == ClassifierKind::Basic => baseline(basic_predict(text)),
            _ => baseline(nuclear_predict(text)),
        }
    }

    pub fn predict_all(&self, corpus: &Corpus) -> Vec<Prediction> {
        corpus.iter().map(|d| self.predict(d.text())).collect()
    }
}

/// Counts per class, failing if either class is absent.
pub(crate) fn require_both_classes(labels: &[Label]) -> Result<[usize; 2]> {
    let positives = labels.iter().filter(|l| l.is_positive()).count();
    let counts = [labels.len() - positives, positives];
    if counts[0] == 0 {
        return Err(Error::MissingClass(Label::Negative));
    }
    if counts[1] == 0 {
        return Err(Error::MissingClass(Label::Positive));
    }
    Ok(counts)
}

/// Parses a comma-separated algorithm list into canonical order.
pub fn parse_algorithms(list: &str) -> Result<Vec<ClassifierKind>> {
    let mut kinds = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<ClassifierKind>>>()?;
    kinds.sort_unstable();
    kinds.dedup();
    if kinds.is_empty() {
        return Err(Error::InvalidParameter(String::from(
            "no algorithms selected",
        )));
    }
    Ok(kinds)
}
