//! Abstract-screening text classification.
//!
//! This crate holds the algorithmic half of `screenml`: tokenization and
//! TF-IDF featurization, the four screening classifiers (the `nuclear` and
//! `basic` keyword baselines, multinomial Naive Bayes and a class-weighted
//! linear SVM), and the repeated random holdout protocol with its metrics
//! and statistics. It is `no_std` and only needs `alloc`; file formats, the
//! CLI and parallel execution live in the `screenml` crate.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classifiers;
pub mod corpus;
pub mod error;
pub mod evaluation;
mod math;
pub mod seed;
pub mod synthetic;
pub mod textproc;

pub use classifiers::{ClassifierKind, TrainedModel, TrainingParams};
pub use corpus::{Corpus, Document, Label, SplitPair};
pub use error::{Error, Result};
pub use evaluation::{ConfusionMatrix, ExperimentConfig, ExperimentReport, MetricSet};
pub use textproc::{SparseVector, StopList, TfidfModel};
