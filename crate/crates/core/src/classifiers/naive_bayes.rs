use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::require_both_classes;
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::math;
use crate::textproc::{FeatureMatrix, SparseVector};

/// Multinomial Naive Bayes over two classes, stored in log space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NbRepr", into = "NbRepr")]
pub struct NaiveBayesModel {
    log_prior: [f64; 2],
    log_likelihood: [Vec<f64>; 2],
    alpha: f64,
}

#[derive(Serialize, Deserialize)]
struct NbRepr {
    log_prior: [f64; 2],
    log_likelihood: [Vec<f64>; 2],
    alpha: f64,
}

impl TryFrom<NbRepr> for NaiveBayesModel {
    type Error = Error;

    fn try_from(r: NbRepr) -> Result<Self> {
        if r.log_likelihood[0].len() != r.log_likelihood[1].len() {
            return Err(Error::InvalidModel(
                "class likelihood lengths differ".into(),
            ));
        }
        Ok(Self {
            log_prior: r.log_prior,
            log_likelihood: r.log_likelihood,
            alpha: r.alpha,
        })
    }
}

impl From<NaiveBayesModel> for NbRepr {
    fn from(m: NaiveBayesModel) -> Self {
        Self {
            log_prior: m.log_prior,
            log_likelihood: m.log_likelihood,
            alpha: m.alpha,
        }
    }
}

/// Result of [`NaiveBayesModel::predict`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NbPrediction {
    pub label: Label,
    /// Joint log scores `log P(c) + sum_t x_t log P(t | c)`.
    pub scores: [f64; 2],
    pub posterior: [f64; 2],
}

/// Fits priors `n_c / n` and smoothed likelihoods
/// `(sum of x_t over class c + alpha) / (sum of all x over class c + alpha * |V|)`.
///
/// Feature values are used as (possibly fractional) counts.
pub fn nb_fit(x: &FeatureMatrix, labels: &[Label], alpha: f64) -> Result<NaiveBayesModel> {
    if x.n_rows() != labels.len() {
        return Err(Error::LengthMismatch(labels.len(), x.n_rows()));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let class_counts = require_both_classes(labels)?;
    let n_features = x.n_features();
    let mut feature_count = [alloc::vec![0.0; n_features], alloc::vec![0.0; n_features]];
    for (i, (row, label)) in x.rows().iter().zip(labels).enumerate() {
        let counts = &mut feature_count[label.index()];
        for (t, w) in row.iter() {
            if !w.is_finite() {
                return Err(Error::NonFinite(i));
            }
            counts[t] += w;
        }
    }
    let n = labels.len() as f64;
    let log_prior = class_counts.map(|c| math::ln(c as f64 / n));
    let log_likelihood = feature_count.map(|counts| {
        let denom = counts.iter().sum::<f64>() + alpha * n_features as f64;
        counts
            .iter()
            .map(|&c| math::ln((c + alpha) / denom))
            .collect()
    });
    Ok(NaiveBayesModel {
        log_prior,
        log_likelihood,
        alpha,
    })
}

impl NaiveBayesModel {
    pub fn log_prior(&self) -> [f64; 2] {
        self.log_prior
    }

    pub fn log_likelihood(&self, label: Label) -> &[f64] {
        &self.log_likelihood[label.index()]
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_features(&self) -> usize {
        self.log_likelihood[0].len()
    }

    /// Scores both classes; ties go to label 0.
    ///
    /// # Panics
    /// If `x` has a column outside the fitted vocabulary.
    pub fn predict(&self, x: &SparseVector) -> NbPrediction {
        let scores = [0, 1].map(|c| {
            let ll = &self.log_likelihood[c];
            self.log_prior[c] + x.iter().map(|(t, w)| w * ll[t]).sum::<f64>()
        });
        let max = scores[0].max(scores[1]);
        let unnormalized = scores.map(|s| math::exp(s - max));
        let z = unnormalized[0] + unnormalized[1];
        NbPrediction {
            label: Label::from_bool(scores[1] > scores[0]),
            scores,
            posterior: unnormalized.map(|u| u / z),
        }
    }
}
