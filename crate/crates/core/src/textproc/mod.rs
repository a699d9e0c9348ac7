//! Text featurization: tokenization, stop-word removal and TF-IDF.
//!
//! All vocabulary and IDF state is fitted on training documents only; a
//! fitted [`TfidfModel`] is immutable and drops unseen terms at transform
//! time.

mod english;
mod sparse;
mod stoplist;
mod tfidf;
mod tokenize;

pub use sparse::{FeatureMatrix, SparseVector};
pub use stoplist::{remove_stopwords, StopList};
pub use tfidf::{fit_vectorizer, smoothed_idf, TfidfModel, Vocabulary};
pub use tokenize::tokenize;
