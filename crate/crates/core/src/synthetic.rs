//! Seeded synthetic screening corpora.
//!
//! Every document is drawn from a shared background vocabulary of clinical
//! research terms plus stop words. Positive documents additionally carry
//! each trial-design signal token with probability `signal_strength`;
//! negative documents carry each with probability `leak`, so keyword rules
//! produce false positives much like narrative reviews that mention trials.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, Document, Label};
use crate::error::{Error, Result};
use crate::{math, seed};

/// Tokens that mark a randomized trial. The first two are the ones the
/// `basic` baseline looks for.
pub const SIGNAL_TOKENS: [&str; 6] = [
    "randomized",
    "RCT",
    "placebo",
    "allocated",
    "blinded",
    "randomly",
];

/// Leak probability used by [`generate_synthetic`].
pub const DEFAULT_LEAK: f64 = 0.1;

const BACKGROUND: [&str; 119] = [
    "patients",
    "study",
    "outcomes",
    "treatment",
    "results",
    "clinical",
    "effect",
    "group",
    "analysis",
    "data",
    "risk",
    "health",
    "care",
    "disease",
    "therapy",
    "participants",
    "age",
    "adults",
    "children",
    "women",
    "men",
    "years",
    "months",
    "weeks",
    "follow",
    "baseline",
    "mortality",
    "hospital",
    "primary",
    "secondary",
    "endpoint",
    "significant",
    "difference",
    "compared",
    "associated",
    "increased",
    "reduced",
    "improved",
    "measured",
    "reported",
    "evidence",
    "quality",
    "pain",
    "function",
    "exercise",
    "intervention",
    "program",
    "dose",
    "drug",
    "medication",
    "surgery",
    "chronic",
    "acute",
    "severe",
    "mild",
    "symptoms",
    "diagnosis",
    "screening",
    "population",
    "cohort",
    "sample",
    "survey",
    "questionnaire",
    "interview",
    "assessment",
    "score",
    "scale",
    "index",
    "blood",
    "pressure",
    "heart",
    "cancer",
    "diabetes",
    "obesity",
    "infection",
    "vaccine",
    "mental",
    "depression",
    "anxiety",
    "sleep",
    "diet",
    "nutrition",
    "weight",
    "body",
    "muscle",
    "bone",
    "fracture",
    "stroke",
    "kidney",
    "liver",
    "lung",
    "asthma",
    "pregnancy",
    "birth",
    "infant",
    "elderly",
    "community",
    "setting",
    "practice",
    "guideline",
    "cost",
    "economic",
    "effectiveness",
    "safety",
    "adverse",
    "events",
    "tolerability",
    "efficacy",
    "response",
    "rate",
    "incidence",
    "prevalence",
    "trend",
    "literature",
    "systematic",
    "meta",
    "review",
    "observational",
    "design",
];

const FILLER: [&str; 12] = [
    "the", "of", "and", "in", "with", "a", "to", "was", "were", "for", "on", "by",
];

/// Parameters of a synthetic corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticParams {
    pub n: usize,
    pub positive_rate: f64,
    pub signal_strength: f64,
    pub leak: f64,
    pub seed: u64,
}

impl SyntheticParams {
    pub fn new(n: usize, positive_rate: f64, signal_strength: f64, seed: u64) -> Self {
        Self {
            n,
            positive_rate,
            signal_strength,
            leak: DEFAULT_LEAK,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 10 {
            return Err(Error::InvalidParameter(format!(
                "n must be at least 10, got {}",
                self.n
            )));
        }
        if !(self.positive_rate > 0.0 && self.positive_rate < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "positive rate must lie strictly between 0 and 1, got {}",
                self.positive_rate
            )));
        }
        for (name, p) in [
            ("signal strength", self.signal_strength),
            ("leak", self.leak),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in [0, 1], got {p}"
                )));
            }
        }
        Ok(())
    }

    /// Number of positive documents: `round(n * positive_rate)`.
    pub fn positives(&self) -> usize {
        math::round(self.n as f64 * self.positive_rate) as usize
    }

    pub fn generate(&self) -> Result<Corpus> {
        self.validate()?;
        let mut rng = seed::rng(self.seed);
        let n_pos = self.positives();
        let mut labels: Vec<Label> = (0..self.n).map(|i| Label::from_bool(i < n_pos)).collect();
        labels.shuffle(&mut rng);
        let width = format!("{}", self.n - 1).len();
        let docs = labels
            .into_iter()
            .enumerate()
            .map(|(i, label)| {
                let p = if label.is_positive() {
                    self.signal_strength
                } else {
                    self.leak
                };
                let text = abstract_text(&mut rng, p);
                Document::new(format!("syn-{i:0width$}"), text, Some(label))
            })
            .collect::<Result<Vec<_>>>()?;
        Corpus::new(docs)
    }
}

/// Synthetic corpus with the default leak probability.
pub fn generate_synthetic(
    n: usize,
    positive_rate: f64,
    signal_strength: f64,
    seed: u64,
) -> Result<Corpus> {
    SyntheticParams::new(n, positive_rate, signal_strength, seed).generate()
}

fn abstract_text(rng: &mut ChaCha8Rng, signal_probability: f64) -> String {
    let len = rng.random_range(40..=90);
    let mut words: Vec<&str> = (0..len)
        .map(|_| {
            if rng.random_bool(0.3) {
                FILLER[rng.random_range(0..FILLER.len())]
            } else {
                // Squaring a uniform draw skews toward the head of the list.
                let u: f64 = rng.random();
                BACKGROUND[(u * u * BACKGROUND.len() as f64) as usize]
            }
        })
        .collect();
    for token in SIGNAL_TOKENS {
        if rng.random_bool(signal_probability) {
            let at = rng.random_range(0..=words.len());
            words.insert(at, token);
        }
    }
    let mut text = String::new();
    let mut sentence_start = true;
    for (i, word) in words.iter().enumerate() {
        if !text.is_empty() {
            text.push(' ');
        }
        if sentence_start {
            let mut chars = word.chars();
            if let Some(first) = chars.next() {
                text.extend(first.to_uppercase());
                text.push_str(chars.as_str());
            }
        } else {
            text.push_str(word);
        }
        sentence_start = (i + 1) % 15 == 0;
        if sentence_start || i + 1 == words.len() {
            text.push('.');
        }
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::basic_predict;

    #[test]
    fn exact_positive_count() {
        let c = generate_synthetic(2000, 0.27, 0.5, 3).unwrap();
        assert_eq!(c.len(), 2000);
        assert_eq!(c.positive_count(), 540);
        let c = generate_synthetic(2042, 0.27, 0.5, 3).unwrap();
        assert_eq!(c.positive_count(), 551);
    }

    #[test]
    fn pure_function_of_arguments() {
        let a = generate_synthetic(50, 0.3, 0.6, 9).unwrap();
        assert_eq!(a, generate_synthetic(50, 0.3, 0.6, 9).unwrap());
        assert_ne!(a, generate_synthetic(50, 0.3, 0.6, 10).unwrap());
    }

    #[test]
    fn full_signal_without_leak_is_separable_by_keywords() {
        let params = SyntheticParams {
            leak: 0.0,
            ..SyntheticParams::new(300, 0.3, 1.0, 4)
        };
        for doc in params.generate().unwrap().iter() {
            assert_eq!(basic_predict(doc.text()), doc.label().unwrap());
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(generate_synthetic(9, 0.3, 0.5, 1).is_err());
        assert!(generate_synthetic(100, 0.0, 0.5, 1).is_err());
        assert!(generate_synthetic(100, 1.0, 0.5, 1).is_err());
        assert!(generate_synthetic(100, 0.3, 1.5, 1).is_err());
    }

    #[test]
    fn ids_are_zero_padded() {
        let c = generate_synthetic(100, 0.3, 0.5, 1).unwrap();
        assert_eq!(c.documents()[0].id(), "syn-00");
        assert_eq!(c.documents()[99].id(), "syn-99");
    }
}
