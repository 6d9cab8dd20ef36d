use std::ops::AddAssign;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

/// Occurrence counts of each alphabet symbol at one position (or summed over a span).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountVector(Vec<u64>);

impl CountVector {
    pub fn new(counts: Vec<u64>) -> Self {
        Self(counts)
    }

    pub fn zeros(k: usize) -> Self {
        Self(vec![0; k])
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mass(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn into_inner(self) -> Vec<u64> {
        self.0
    }
}

impl AddAssign<&CountVector> for CountVector {
    fn add_assign(&mut self, rhs: &CountVector) {
        assert_eq!(self.0.len(), rhs.0.len(), "count vector length mismatch");
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

/// Half-open range of 0-based position indices `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Result<Self> {
        if start >= end {
            return Err(Error::InvalidSpan { start, end, len: end });
        }
        Ok(Self { start, end })
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    /// Splits into `[start, start + n)` and `[start + n, end)`.
    pub fn split_at(&self, n: usize) -> (Span, Span) {
        assert!(n >= 1 && n < self.len(), "split point outside span interior");
        (
            Span { start: self.start, end: self.start + n },
            Span { start: self.start + n, end: self.end },
        )
    }
}

/// A sequence of count vectors over a shared alphabet.
///
/// Positions are stored sparsely: each position keeps only its nonzero
/// `(symbol, count)` entries, sorted by symbol index. This keeps one-hot
/// sequences at one entry per position regardless of alphabet size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSequence {
    alphabet: Alphabet,
    offsets: Vec<usize>,
    entries: Vec<(u32, u64)>,
    labels: Option<Vec<i64>>,
}

impl WeightedSequence {
    /// Builds a sequence from dense count rows.
    pub fn from_counts(alphabet: Alphabet, rows: &[CountVector]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptySequence);
        }
        let k = alphabet.len();
        let mut builder = Builder::new(alphabet, rows.len());
        for row in rows {
            if row.len() != k {
                return Err(Error::LengthMismatch { expected: k, found: row.len() });
            }
            builder.push_dense(row.counts());
        }
        builder.finish_checked()
    }

    /// Attaches display labels, one per position.
    pub fn with_labels(mut self, labels: Vec<i64>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::InvalidConfig(format!(
                "{} position labels for {} positions",
                labels.len(),
                self.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of positions `N`.
    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn full_span(&self) -> Span {
        Span { start: 0, end: self.len() }
    }

    /// Nonzero `(symbol, count)` entries of position `i`, sorted by symbol.
    pub fn entries(&self, i: usize) -> &[(u32, u64)] {
        &self.entries[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn position(&self, i: usize) -> CountVector {
        let mut v = vec![0; self.alphabet.len()];
        for &(s, c) in self.entries(i) {
            v[s as usize] = c;
        }
        CountVector(v)
    }

    pub fn position_mass(&self, i: usize) -> u64 {
        self.entries(i).iter().map(|&(_, c)| c).sum()
    }

    pub fn total_mass(&self) -> u64 {
        self.entries.iter().map(|&(_, c)| c).sum()
    }

    pub fn position_labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    /// Display label of position `i`; 1-based index when no labels are attached.
    pub fn label(&self, i: usize) -> i64 {
        match &self.labels {
            Some(l) => l[i],
            None => i as i64 + 1,
        }
    }

    pub fn check_span(&self, span: Span) -> Result<()> {
        if span.start >= span.end || span.end > self.len() {
            return Err(Error::InvalidSpan { start: span.start, end: span.end, len: self.len() });
        }
        Ok(())
    }

    /// Componentwise sum of the count vectors in `span`.
    pub fn tally(&self, span: Span) -> Result<CountVector> {
        self.check_span(span)?;
        let mut acc = vec![0u64; self.alphabet.len()];
        for &(s, c) in &self.entries[self.offsets[span.start]..self.offsets[span.end]] {
            acc[s as usize] += c;
        }
        Ok(CountVector(acc))
    }

    /// The symbol of each position when every position holds exactly one
    /// occurrence; `None` otherwise.
    pub fn one_hot_symbols(&self) -> Option<Vec<&str>> {
        (0..self.len())
            .map(|i| match self.entries(i) {
                [(s, 1)] => Some(self.alphabet.label(*s as usize)),
                _ => None,
            })
            .collect()
    }

    /// New sequence holding the given positions in the given order. No mass
    /// check: a gathered span may legitimately be all zeros.
    pub(crate) fn gather(&self, indices: &[usize]) -> WeightedSequence {
        let mut builder = Builder::new(self.alphabet.clone(), indices.len());
        for &i in indices {
            builder.push_sparse(self.entries(i));
        }
        builder.finish()
    }
}

struct Builder {
    alphabet: Alphabet,
    offsets: Vec<usize>,
    entries: Vec<(u32, u64)>,
}

impl Builder {
    fn new(alphabet: Alphabet, capacity: usize) -> Self {
        let mut offsets = Vec::with_capacity(capacity + 1);
        offsets.push(0);
        Self { alphabet, offsets, entries: Vec::with_capacity(capacity) }
    }

    fn push_dense(&mut self, counts: &[u64]) {
        for (s, &c) in counts.iter().enumerate() {
            if c > 0 {
                self.entries.push((s as u32, c));
            }
        }
        self.offsets.push(self.entries.len());
    }

    fn push_sparse(&mut self, entries: &[(u32, u64)]) {
        self.entries.extend_from_slice(entries);
        self.offsets.push(self.entries.len());
    }

    fn finish(self) -> WeightedSequence {
        WeightedSequence {
            alphabet: self.alphabet,
            offsets: self.offsets,
            entries: self.entries,
            labels: None,
        }
    }

    fn finish_checked(self) -> Result<WeightedSequence> {
        let seq = self.finish();
        if seq.is_empty() {
            return Err(Error::EmptySequence);
        }
        if seq.total_mass() == 0 {
            return Err(Error::ZeroMass);
        }
        Ok(seq)
    }
}

/// Encodes each token as a one-hot position over `alphabet`.
pub fn one_hot<S: AsRef<str>>(tokens: &[S], alphabet: &Alphabet) -> Result<WeightedSequence> {
    if tokens.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut builder = Builder::new(alphabet.clone(), tokens.len());
    for (position, token) in tokens.iter().enumerate() {
        let token = token.as_ref();
        let s = alphabet.index_of(token).ok_or_else(|| Error::UnknownToken {
            token: token.to_owned(),
            position,
        })?;
        builder.push_sparse(&[(s as u32, 1)]);
    }
    builder.finish_checked()
}
