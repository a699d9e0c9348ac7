//! Fitted IDF and transformed vectors against a dense brute-force evaluation
//! of the smoothed TF-IDF formula.

use std::collections::{BTreeMap, BTreeSet};

use screenml_core::textproc::fit_vectorizer;
use screenml_core::{Corpus, Document, StopList};

const TOL: f64 = 1e-9;

/// Fixture corpora of at most ten documents, each paired with texts to
/// transform after fitting (some with out-of-vocabulary or stop-word-only
/// content).
fn fixtures() -> Vec<(Vec<&'static str>, Vec<&'static str>)> {
    vec![
        (
            vec![
                "apple banana apple",
                "banana cherry",
                "cherry cherry durian",
            ],
            vec!["apple durian", "kiwi mango", "banana banana banana"],
        ),
        (
            vec![
                "A randomized, double-blind trial of aspirin.",
                "Aspirin in a cohort of 1200 adults.",
                "Review: randomized trials of aspirin and statins.",
                "Statins for primary prevention in adults.",
            ],
            vec![
                "Randomized aspirin",
                "the of and",
                "ASPIRIN aspirin Aspirin",
            ],
        ),
        (
            vec![
                "x y z",
                "The patients were randomly allocated to placebo.",
                "Patients, patients, patients!",
                "Placebo-controlled study in 40 patients.",
                "Children and adolescents with asthma.",
                "Asthma asthma children",
            ],
            vec!["placebo asthma patients", "zz top", "x"],
        ),
        (
            vec![
                "Überprüfung der Studie",
                "studie studie naïve café",
                "café au lait",
                "Naïve Bayes for café reviews",
            ],
            vec!["café naïve studie überprüfung", "bayes"],
        ),
        (
            vec![
                "one two three four five",
                "two three four five six",
                "three four five six seven",
                "four five six seven eight",
                "five six seven eight nine",
                "six seven eight nine ten",
                "seven eight nine ten eleven",
                "eight nine ten eleven twelve",
                "nine ten eleven twelve thirteen",
                "ten eleven twelve thirteen fourteen",
            ],
            vec!["one fourteen", "five five five ten", "fifteen"],
        ),
    ]
}

/// Lowercased runs of alphanumeric characters of length two or more, with
/// stop words removed.
fn oracle_tokens(text: &str, stop: &StopList) -> Vec<String> {
    let lower = text.to_lowercase();
    lower
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 2)
        .filter(|t| !stop.contains(t))
        .map(str::to_string)
        .collect()
}

struct DenseOracle {
    terms: Vec<String>,
    idf: Vec<f64>,
    stop: StopList,
}

impl DenseOracle {
    fn fit(docs: &[&str], stop: StopList) -> Self {
        let tokenized: Vec<Vec<String>> = docs.iter().map(|d| oracle_tokens(d, &stop)).collect();
        let terms: Vec<String> = tokenized
            .iter()
            .flatten()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let n = docs.len() as f64;
        let idf = terms
            .iter()
            .map(|t| {
                let df = tokenized.iter().filter(|d| d.contains(t)).count() as f64;
                ((1.0 + n) / (1.0 + df)).ln() + 1.0
            })
            .collect();
        Self { terms, idf, stop }
    }

    fn transform(&self, text: &str) -> BTreeMap<String, f64> {
        let tokens = oracle_tokens(text, &self.stop);
        let raw: Vec<f64> = self
            .terms
            .iter()
            .zip(&self.idf)
            .map(|(t, idf)| tokens.iter().filter(|x| *x == t).count() as f64 * idf)
            .collect();
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.terms
            .iter()
            .zip(raw)
            .map(|(t, v)| (t.clone(), if norm == 0.0 { 0.0 } else { v / norm }))
            .collect()
    }
}

fn corpus(texts: &[&str]) -> Corpus {
    Corpus::new(
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| Document::new(format!("d{i}"), *t, None).unwrap())
            .collect(),
    )
    .unwrap()
}

fn check_fixture(train: &[&str], probes: &[&str], stop: StopList) {
    let model = fit_vectorizer(&corpus(train), &stop).unwrap();
    let oracle = DenseOracle::fit(train, stop);

    let vocab = model.vocabulary();
    assert_eq!(
        vocab.len(),
        oracle.terms.len(),
        "vocabulary size for {train:?}"
    );
    for (term, idf) in oracle.terms.iter().zip(&oracle.idf) {
        let j = vocab
            .index_of(term)
            .unwrap_or_else(|| panic!("`{term}` missing from vocabulary"));
        assert!(
            (model.idf()[j] - idf).abs() <= TOL,
            "idf of `{term}`: {} vs {idf}",
            model.idf()[j]
        );
    }

    for text in train.iter().chain(probes) {
        let got = model.transform(text).to_dense(model.n_features());
        let want = oracle.transform(text);
        for (term, w) in &want {
            let j = vocab.index_of(term).unwrap();
            assert!(
                (got[j] - w).abs() <= TOL,
                "weight of `{term}` in {text:?}: {} vs {w}",
                got[j]
            );
        }
        let norm: f64 = got.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(
            norm == 0.0 || (norm - 1.0).abs() <= 1e-12,
            "norm {norm} for {text:?}"
        );
    }
}

#[test]
fn five_fixture_corpora_match_dense_oracle_with_english_stop_list() {
    for (train, probes) in fixtures() {
        check_fixture(&train, &probes, StopList::english());
    }
}

#[test]
fn five_fixture_corpora_match_dense_oracle_without_stop_list() {
    for (train, probes) in fixtures() {
        check_fixture(&train, &probes, StopList::empty());
    }
}

#[test]
fn stop_word_only_text_maps_to_zero_vector() {
    let model = fit_vectorizer(
        &corpus(&["aspirin trial", "placebo trial"]),
        &StopList::english(),
    )
    .unwrap();
    assert!(model.transform("the and of was were").is_zero());
    assert!(model.transform("").is_zero());
}

#[test]
fn repeating_the_training_corpus_changes_only_document_counts() {
    // Duplicating every document doubles N and each df; the smoothed IDF
    // then differs from the single copy in a predictable way.
    let (train, _) = &fixtures()[1];
    let doubled: Vec<&str> = train.iter().chain(train.iter()).copied().collect();
    let single = fit_vectorizer(&corpus(train), &StopList::english()).unwrap();
    let twice = fit_vectorizer(&corpus(&doubled), &StopList::english()).unwrap();
    assert_eq!(single.vocabulary().terms(), twice.vocabulary().terms());
    let n = train.len() as f64;
    for j in 0..single.n_features() {
        let df = single.vocabulary().document_frequency(j) as f64;
        assert_eq!(twice.vocabulary().document_frequency(j) as f64, 2.0 * df);
        let expected = ((1.0 + 2.0 * n) / (1.0 + 2.0 * df)).ln() + 1.0;
        assert!((twice.idf()[j] - expected).abs() <= TOL);
    }
}
