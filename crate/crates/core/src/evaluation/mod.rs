//! Repeated random holdout evaluation.
//!
//! Each repeat draws a seeded unstratified split, fits the vectorizer and
//! the learned classifiers on the training half only, and scores every
//! algorithm on the test half. Per-repeat confusion matrices are aggregated
//! as mean and sample standard deviation, and F1 scores are compared
//! pairwise with Welch's t-test.

mod experiment;
mod metrics;
mod stats;

pub use experiment::{
    assemble_report, draw_fold, run_experiment, run_repeat, AlgorithmSummary, ConfusionSummary,
    CorpusSummary, Diagnostics, ExperimentConfig, ExperimentReport, Fold, MetricSummary,
    PreparedCorpus, RepeatOutcome, RetryRecord, SplitSummary, MAX_FOLD_DRAWS,
};
pub use metrics::{confusion, ConfusionMatrix, MetricSet};
pub use stats::{
    aggregate, compare_all, ln_gamma, regularized_incomplete_beta, student_t_two_sided_p,
    welch_ttest, Aggregate, Comparison, PairwiseComparison, PairwiseTests, TTestResult,
};
