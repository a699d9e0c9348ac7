use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::english::ENGLISH;

/// A set of lowercase tokens removed before featurization.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StopList {
    tokens: BTreeSet<String>,
}

impl StopList {
    /// The built-in 318-word English list.
    pub fn english() -> Self {
        Self::from_tokens(ENGLISH.iter().copied())
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a list from arbitrary tokens, lowercasing each.
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            tokens: tokens
                .into_iter()
                .map(|t| t.as_ref().to_lowercase())
                .filter(|t| !t.is_empty())
                .collect(),
        }
    }

    /// Parses the stop-list file format: one token per line, blank lines and
    /// lines starting with `#` ignored, surrounding whitespace trimmed.
    pub fn parse(contents: &str) -> Self {
        Self::from_tokens(
            contents
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn contains(&self, token: &str) -> bool {
        if self.tokens.contains(token) {
            return true;
        }
        // Tokens from `tokenize` are already lowercase; others are folded here.
        token.chars().any(char::is_uppercase) && self.tokens.contains(&token.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }
}

/// Order-preserving removal of stop words.
pub fn remove_stopwords<S: AsRef<str>>(tokens: &[S], stoplist: &StopList) -> Vec<String> {
    tokens
        .iter()
        .map(AsRef::as_ref)
        .filter(|t| !stoplist.contains(t))
        .map(ToString::to_string)
        .collect()
}
