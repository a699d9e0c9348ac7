use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::metrics::{ConfusionMatrix, MetricSet};
use super::stats::{compare_all, Aggregate, PairwiseTests};
use crate::classifiers::{
    basic_predict_tokens, nb_fit, require_both_classes, svm_fit, ClassifierKind, SvmParams,
    TrainingParams,
};
use crate::corpus::{split_indices, test_size, Corpus, Label};
use crate::error::{Error, Result};
use crate::seed::{derive_seed, repeat_seed};
use crate::textproc::{remove_stopwords, tokenize, StopList, TfidfModel};

/// Upper bound on split draws per repeat before giving up.
pub const MAX_FOLD_DRAWS: u32 = 1000;

const SVM_STREAM: u64 = 0x0053_564d;

/// Protocol and hyperparameter settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub repeats: usize,
    pub test_fraction: f64,
    pub master_seed: u64,
    pub algorithms: Vec<ClassifierKind>,
    /// Naive Bayes smoothing.
    pub alpha: f64,
    /// SVM regularization trade-off.
    pub c: f64,
    pub balanced: bool,
    pub tol: f64,
    pub max_epochs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let svm = SvmParams::default();
        Self {
            repeats: 1000,
            test_fraction: 0.2,
            master_seed: 0,
            algorithms: ClassifierKind::ALL.to_vec(),
            alpha: 1.0,
            c: svm.c,
            balanced: svm.balanced,
            tol: svm.tol,
            max_epochs: svm.max_epochs,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::InvalidParameter("repeats must be at least 1".into()));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::TestFraction(self.test_fraction));
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidParameter("no algorithms selected".into()));
        }
        self.training_params(0).validate()
    }

    /// Algorithms in reporting order without duplicates.
    pub fn normalized_algorithms(&self) -> Vec<ClassifierKind> {
        let mut kinds = self.algorithms.clone();
        kinds.sort_unstable();
        kinds.dedup();
        kinds
    }

    pub fn training_params(&self, svm_seed: u64) -> TrainingParams {
        TrainingParams {
            alpha: self.alpha,
            svm: SvmParams {
                c: self.c,
                balanced: self.balanced,
                tol: self.tol,
                max_epochs: self.max_epochs,
                seed: svm_seed,
            },
        }
    }

    fn needs_features(&self) -> bool {
        self.algorithms.iter().any(|k| k.is_learned())
    }
}

/// A corpus tokenized once up front. Tokenization, stop-word removal and the
/// keyword baseline only look at one document at a time, so caching them
/// leaks nothing across folds.
#[derive(Clone, Debug)]
pub struct PreparedCorpus {
    labels: Vec<Label>,
    tokens: Vec<Vec<String>>,
    basic: Vec<Label>,
}

impl PreparedCorpus {
    /// Requires every document labeled and both classes present.
    pub fn new(corpus: &Corpus, stoplist: &StopList) -> Result<Self> {
        let labels = corpus.labels()?;
        require_both_classes(&labels)?;
        let mut tokens = Vec::with_capacity(corpus.len());
        let mut basic = Vec::with_capacity(corpus.len());
        for doc in corpus {
            let raw = tokenize(doc.text());
            basic.push(basic_predict_tokens(&raw));
            tokens.push(remove_stopwords(&raw, stoplist));
        }
        Ok(Self {
            labels,
            tokens,
            basic,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Stop-word filtered tokens of document `i`.
    pub fn tokens(&self, i: usize) -> &[String] {
        &self.tokens[i]
    }

    /// Fits the vectorizer on the given documents only.
    pub fn fit_vectorizer(&self, docs: &[usize]) -> Result<TfidfModel> {
        TfidfModel::fit_tokens(docs.iter().map(|&i| self.tokens[i].as_slice()))
    }
}

/// The split used by one repeat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fold {
    pub repeat: usize,
    /// Seed of the accepted draw.
    pub seed: u64,
    /// Draws rejected because the training half lacked a class.
    pub retries: u32,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Draws the split for `repeat`, re-drawing with derived seeds until the
/// training half holds both classes.
pub fn draw_fold(labels: &[Label], config: &ExperimentConfig, repeat: usize) -> Result<Fold> {
    let base = repeat_seed(config.master_seed, repeat as u64);
    for attempt in 0..MAX_FOLD_DRAWS {
        let seed = if attempt == 0 {
            base
        } else {
            derive_seed(base, u64::from(attempt))
        };
        let (train, test) = split_indices(labels.len(), config.test_fraction, seed)?;
        let positives = train.iter().filter(|&&i| labels[i].is_positive()).count();
        if positives > 0 && positives < train.len() {
            return Ok(Fold {
                repeat,
                seed,
                retries: attempt,
                train,
                test,
            });
        }
    }
    Err(Error::DegenerateFolds(MAX_FOLD_DRAWS))
}

/// Everything one repeat contributes to the report.
#[derive(Clone, Debug, PartialEq)]
pub struct RepeatOutcome {
    pub repeat: usize,
    pub seed: u64,
    pub retries: u32,
    pub train_positive_rate: f64,
    pub test_positive_rate: f64,
    pub test_negative_fraction: f64,
    pub test_size: usize,
    /// One matrix per algorithm, in reporting order.
    pub confusion: Vec<(ClassifierKind, ConfusionMatrix)>,
}

/// Runs repeat `repeat` of the protocol.
pub fn run_repeat(
    config: &ExperimentConfig,
    prepared: &PreparedCorpus,
    repeat: usize,
) -> Result<RepeatOutcome> {
    let labels = prepared.labels();
    let fold = draw_fold(labels, config, repeat)?;
    let y_train: Vec<Label> = fold.train.iter().map(|&i| labels[i]).collect();
    let y_test: Vec<Label> = fold.test.iter().map(|&i| labels[i]).collect();

    let features = if config.needs_features() {
        let tfidf = prepared.fit_vectorizer(&fold.train)?;
        let x_train = tfidf.transform_all(fold.train.iter().map(|&i| prepared.tokens(i)));
        let x_test = tfidf.transform_all(fold.test.iter().map(|&i| prepared.tokens(i)));
        Some((x_train, x_test))
    } else {
        None
    };
    let params = config.training_params(derive_seed(fold.seed, SVM_STREAM));

    let mut confusion = Vec::new();
    for kind in config.normalized_algorithms() {
        let predicted: Vec<Label> = match (kind, &features) {
            (ClassifierKind::Nuclear, _) => alloc::vec![Label::Negative; fold.test.len()],
            (ClassifierKind::Basic, _) => fold.test.iter().map(|&i| prepared.basic[i]).collect(),
            (ClassifierKind::Bayes, Some((x_train, x_test))) => {
                let nb = nb_fit(x_train, &y_train, params.alpha)?;
                x_test.rows().iter().map(|x| nb.predict(x).label).collect()
            }
            (ClassifierKind::Svm, Some((x_train, x_test))) => {
                let svm = svm_fit(x_train, &y_train, &params.svm)?;
                x_test.rows().iter().map(|x| svm.predict(x).0).collect()
            }
            _ => unreachable!("features are fitted whenever a learned classifier runs"),
        };
        confusion.push((kind, super::confusion(&y_test, &predicted)?));
    }

    let train_pos = y_train.iter().filter(|l| l.is_positive()).count();
    let test_pos = y_test.iter().filter(|l| l.is_positive()).count();
    let n_test = y_test.len();
    Ok(RepeatOutcome {
        repeat,
        seed: fold.seed,
        retries: fold.retries,
        train_positive_rate: train_pos as f64 / y_train.len() as f64,
        test_positive_rate: test_pos as f64 / n_test as f64,
        test_negative_fraction: (n_test - test_pos) as f64 / n_test as f64,
        test_size: n_test,
        confusion,
    })
}

/// Runs every repeat in order on the current thread.
pub fn run_experiment(
    config: &ExperimentConfig,
    corpus: &Corpus,
    stoplist: &StopList,
) -> Result<ExperimentReport> {
    config.validate()?;
    let prepared = PreparedCorpus::new(corpus, stoplist)?;
    let outcomes = (0..config.repeats)
        .map(|r| run_repeat(config, &prepared, r))
        .collect::<Result<Vec<_>>>()?;
    assemble_report(config, corpus, outcomes)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub documents: usize,
    pub positives: usize,
    pub positive_rate: f64,
}

/// Split sizes and the label balance of each half across repeats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSummary {
    pub train_size: usize,
    pub test_size: usize,
    pub train_positive_rate: Aggregate,
    pub test_positive_rate: Aggregate,
    pub test_negative_fraction: Aggregate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfusionSummary {
    pub tn: Aggregate,
    pub fp: Aggregate,
    #[serde(rename = "fn")]
    pub fn_: Aggregate,
    pub tp: Aggregate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub accuracy: Aggregate,
    pub precision: Aggregate,
    pub recall: Aggregate,
    pub f1: Aggregate,
    pub false_omission_rate: Aggregate,
    pub predicted_negative_fraction: Aggregate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: ClassifierKind,
    pub confusion: ConfusionSummary,
    pub metrics: MetricSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RetryRecord {
    pub repeat: usize,
    pub retries: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub total_retries: u64,
    pub retried_repeats: Vec<RetryRecord>,
}

/// Aggregated results of a full run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub corpus: CorpusSummary,
    pub split: SplitSummary,
    pub algorithms: Vec<AlgorithmSummary>,
    pub t_tests: PairwiseTests,
    pub diagnostics: Diagnostics,
}

impl ExperimentReport {
    pub fn algorithm(&self, kind: ClassifierKind) -> Option<&AlgorithmSummary> {
        self.algorithms.iter().find(|a| a.algorithm == kind)
    }
}

/// Aggregates per-repeat outcomes. The result depends only on the set of
/// outcomes, not on the order they arrive in.
pub fn assemble_report(
    config: &ExperimentConfig,
    corpus: &Corpus,
    mut outcomes: Vec<RepeatOutcome>,
) -> Result<ExperimentReport> {
    outcomes.sort_by_key(|o| o.repeat);
    if outcomes.len() != config.repeats || outcomes.iter().enumerate().any(|(i, o)| o.repeat != i) {
        return Err(Error::InvalidParameter(alloc::format!(
            "expected outcomes for repeats 0..{}",
            config.repeats
        )));
    }
    let kinds = config.normalized_algorithms();
    let n_test = test_size(corpus.len(), config.test_fraction);

    let mut algorithms = Vec::with_capacity(kinds.len());
    let mut f1_series = Vec::with_capacity(kinds.len());
    for (k, &kind) in kinds.iter().enumerate() {
        let matrices: Vec<ConfusionMatrix> = outcomes
            .iter()
            .map(|o| {
                debug_assert_eq!(o.confusion[k].0, kind);
                o.confusion[k].1
            })
            .collect();
        let metrics: Vec<MetricSet> = matrices
            .iter()
            .map(|m| m.metrics().ok_or(Error::Empty))
            .collect::<Result<_>>()?;
        let cell = |f: fn(&ConfusionMatrix) -> u64| {
            Aggregate::from_options(matrices.iter().map(|m| Some(f(m) as f64)))
        };
        let metric =
            |f: fn(&MetricSet) -> Option<f64>| Aggregate::from_options(metrics.iter().map(f));
        algorithms.push(AlgorithmSummary {
            algorithm: kind,
            confusion: ConfusionSummary {
                tn: cell(|m| m.true_negative),
                fp: cell(|m| m.false_positive),
                fn_: cell(|m| m.false_negative),
                tp: cell(|m| m.true_positive),
            },
            metrics: MetricSummary {
                accuracy: metric(|m| Some(m.accuracy)),
                precision: metric(|m| m.precision),
                recall: metric(|m| m.recall),
                f1: metric(|m| m.f1),
                false_omission_rate: metric(|m| m.false_omission_rate),
                predicted_negative_fraction: metric(|m| Some(m.predicted_negative_fraction)),
            },
        });
        f1_series.push((kind, metrics.iter().map(|m| m.f1).collect::<Vec<_>>()));
    }

    let rate = |f: fn(&RepeatOutcome) -> f64| {
        Aggregate::from_values(&outcomes.iter().map(f).collect::<Vec<_>>())
    };
    let retried_repeats: Vec<RetryRecord> = outcomes
        .iter()
        .filter(|o| o.retries > 0)
        .map(|o| RetryRecord {
            repeat: o.repeat,
            retries: o.retries,
        })
        .collect();
    Ok(ExperimentReport {
        config: ExperimentConfig {
            algorithms: kinds,
            ..config.clone()
        },
        corpus: CorpusSummary {
            documents: corpus.len(),
            positives: corpus.positive_count(),
            positive_rate: corpus.positive_rate().unwrap_or(0.0),
        },
        split: SplitSummary {
            train_size: corpus.len() - n_test,
            test_size: n_test,
            train_positive_rate: rate(|o| o.train_positive_rate),
            test_positive_rate: rate(|o| o.test_positive_rate),
            test_negative_fraction: rate(|o| o.test_negative_fraction),
        },
        algorithms,
        t_tests: compare_all(&f1_series),
        diagnostics: Diagnostics {
            total_retries: retried_repeats.iter().map(|r| u64::from(r.retries)).sum(),
            retried_repeats,
        },
    })
}
