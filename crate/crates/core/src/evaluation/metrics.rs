use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};

/// Counts of (actual, predicted) pairs on one test fold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    #[serde(rename = "tn")]
    pub true_negative: u64,
    #[serde(rename = "fp")]
    pub false_positive: u64,
    #[serde(rename = "fn")]
    pub false_negative: u64,
    #[serde(rename = "tp")]
    pub true_positive: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.true_negative + self.false_positive + self.false_negative + self.true_positive
    }

    pub fn record(&mut self, actual: Label, predicted: Label) {
        let cell = match (actual, predicted) {
            (Label::Negative, Label::Negative) => &mut self.true_negative,
            (Label::Negative, Label::Positive) => &mut self.false_positive,
            (Label::Positive, Label::Negative) => &mut self.false_negative,
            (Label::Positive, Label::Positive) => &mut self.true_positive,
        };
        *cell += 1;
    }

    /// `None` for an empty matrix.
    pub fn metrics(&self) -> Option<MetricSet> {
        (self.total() > 0).then(|| {
            MetricSet::from_cells(
                self.true_negative as f64,
                self.false_positive as f64,
                self.false_negative as f64,
                self.true_positive as f64,
            )
        })
    }
}

/// Tallies predictions against ground truth.
pub fn confusion(actual: &[Label], predicted: &[Label]) -> Result<ConfusionMatrix> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch(actual.len(), predicted.len()));
    }
    if actual.is_empty() {
        return Err(Error::Empty);
    }
    let mut cm = ConfusionMatrix::default();
    for (&a, &p) in actual.iter().zip(predicted) {
        cm.record(a, p);
    }
    Ok(cm)
}

/// Statistics derived from one confusion matrix. Ratios whose denominator
/// is zero are `None` rather than 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub accuracy: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    /// `fn / (fn + tn)`: share of rejected documents that were positives.
    pub false_omission_rate: Option<f64>,
    /// `(tn + fn) / n`: share of documents a reviewer would not need to read.
    pub predicted_negative_fraction: f64,
}

impl MetricSet {
    /// Works on real-valued cells so that averaged matrices can be scored.
    ///
    /// # Panics
    /// If the cells sum to zero.
    pub fn from_cells(tn: f64, fp: f64, fn_: f64, tp: f64) -> Self {
        let n = tn + fp + fn_ + tp;
        assert!(n > 0.0, "metrics of an empty confusion matrix");
        let ratio = |num: f64, den: f64| (den > 0.0).then(|| num / den);
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = match (precision, recall) {
            (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
            _ => None,
        };
        Self {
            accuracy: (tp + tn) / n,
            precision,
            recall,
            f1,
            false_omission_rate: ratio(fn_, fn_ + tn),
            predicted_negative_fraction: (tn + fn_) / n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn labels(bits: &[u8]) -> alloc::vec::Vec<Label> {
        bits.iter().map(|&b| Label::from_bool(b == 1)).collect()
    }

    #[test]
    fn one_of_each_cell() {
        let cm = confusion(&labels(&[0, 0, 1, 1]), &labels(&[0, 1, 0, 1])).unwrap();
        assert_eq!(
            cm,
            ConfusionMatrix {
                true_negative: 1,
                false_positive: 1,
                false_negative: 1,
                true_positive: 1
            }
        );
    }

    #[test]
    fn all_negative_predictions() {
        let cm = confusion(&labels(&[0, 1, 1, 0, 0]), &labels(&[0; 5])).unwrap();
        assert_eq!((cm.false_positive, cm.true_positive), (0, 0));
        let m = cm.metrics().unwrap();
        assert_eq!(m.precision, None);
        assert_eq!(m.f1, None);
        assert_eq!(m.recall, Some(0.0));
        assert_eq!(m.accuracy, 0.6);
        assert_eq!(m.predicted_negative_fraction, 1.0);
    }

    #[test]
    fn perfect_predictions() {
        let y = labels(&[0, 1, 1, 0]);
        let m = confusion(&y, &y).unwrap().metrics().unwrap();
        assert_eq!(m.accuracy, 1.0);
        assert_eq!(m.f1, Some(1.0));
        assert_eq!(m.false_omission_rate, Some(0.0));
    }

    #[test]
    fn mismatched_lengths() {
        assert_eq!(
            confusion(&labels(&[0, 1]), &labels(&[0])),
            Err(Error::LengthMismatch(2, 1))
        );
        assert_eq!(confusion(&[], &[]), Err(Error::Empty));
    }

    #[test]
    fn no_positives_anywhere() {
        let m = MetricSet::from_cells(10.0, 0.0, 0.0, 0.0);
        assert_eq!(m.recall, None);
        assert_eq!(m.false_omission_rate, Some(0.0));
        let m = MetricSet::from_cells(0.0, 3.0, 2.0, 0.0);
        assert_eq!(m.precision, Some(0.0));
        assert_eq!(m.f1, None);
        assert_eq!(m.false_omission_rate, Some(1.0));
    }

    #[test]
    fn svm_mean_matrix() {
        let m = MetricSet::from_cells(272.80, 24.05, 14.09, 98.06);
        assert_abs_diff_eq!(m.accuracy, 0.9067, epsilon = 5e-5);
        assert_abs_diff_eq!(m.f1.unwrap(), 0.8372, epsilon = 5e-5);
        assert_abs_diff_eq!(m.false_omission_rate.unwrap(), 0.0491, epsilon = 5e-5);
        assert_abs_diff_eq!(m.predicted_negative_fraction, 0.7014, epsilon = 5e-5);
    }
}
