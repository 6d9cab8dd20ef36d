use std::collections::HashMap;

use crate::error::{Error, Result};

/// An ordered set of distinct symbol labels.
///
/// Symbol `i` is `labels()[i]`; lookup goes through a hash index built at
/// construction time.
#[derive(Debug, Clone)]
pub struct Alphabet {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidAlphabet("no symbols".into()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::InvalidAlphabet(format!("symbol {i} is empty")));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {label:?}")));
            }
        }
        Ok(Self { labels, index })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for Alphabet {}

/// Builds the alphabet of `tokens`, ordered by first appearance.
pub fn build_alphabet<S: AsRef<str>>(tokens: &[S]) -> Result<Alphabet> {
    if tokens.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut seen = HashMap::new();
    let mut labels = Vec::new();
    for token in tokens {
        let token = token.as_ref();
        if !seen.contains_key(token) {
            seen.insert(token.to_owned(), labels.len());
            labels.push(token.to_owned());
        }
    }
    Alphabet::new(labels)
}
