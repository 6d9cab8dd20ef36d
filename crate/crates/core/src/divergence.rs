//! Shannon entropy, the weighted Jensen-Shannon divergence, and the split
//! profile `D_n` of a span.
//!
//! All quantities are in bits. Zero probabilities contribute nothing to an
//! entropy (`0 log 0 = 0`).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{CountVector, Span, WeightedSequence};

const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Number of split points evaluated per parallel work unit.
const CHUNK: usize = 4096;

/// A probability vector over an alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("no states".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidDistribution(format!("entry {p} outside [0, 1]")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(Self(probs))
    }

    /// Relative frequencies of `counts`; `None` when the mass is zero.
    pub fn from_counts(counts: &CountVector) -> Option<Self> {
        let mass = counts.mass();
        if mass == 0 {
            return None;
        }
        let m = mass as f64;
        Some(Self(counts.counts().iter().map(|&c| c as f64 / m).collect()))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

fn clogc(c: u64) -> f64 {
    if c > 1 {
        let c = c as f64;
        c * c.log2()
    } else {
        0.0
    }
}

pub fn shannon_entropy(p: &Distribution) -> f64 {
    -p.0.iter().map(|&x| plogp(x)).sum::<f64>()
}

/// `H[w_p p + w_q q] - w_p H[p] - w_q H[q]` with `w_q = 1 - w_p`.
///
/// Panics if `p` and `q` have different lengths or `w_p` lies outside `[0, 1]`.
pub fn jensen_shannon(p: &Distribution, q: &Distribution, w_p: f64) -> f64 {
    assert_eq!(p.len(), q.len(), "distributions over different alphabets");
    assert!((0.0..=1.0).contains(&w_p), "weight {w_p} outside [0, 1]");
    let w_q = 1.0 - w_p;
    let mut mix = 0.0;
    let mut hp = 0.0;
    let mut hq = 0.0;
    for (&a, &b) in p.0.iter().zip(&q.0) {
        mix -= plogp(w_p * a + w_q * b);
        hp -= plogp(a);
        hq -= plogp(b);
    }
    (mix - w_p * hp - w_q * hq).max(0.0)
}

/// How the two sides of a split are weighted in the divergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    /// `w_f = n / L`: each side weighted by its number of positions.
    #[default]
    Positions,
    /// `w_f = mass(left) / mass(span)`: each side weighted by its total count.
    Mass,
}

impl WeightMode {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightMode::Positions => "positions",
            WeightMode::Mass => "mass",
        }
    }
}

impl std::str::FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positions" => Ok(WeightMode::Positions),
            "mass" => Ok(WeightMode::Mass),
            other => Err(Error::InvalidConfig(format!("unknown weight mode {other:?}"))),
        }
    }
}

/// Divergence `D_n` for every interior split `n = 1..L-1` of a span.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitProfile {
    span: Span,
    weight_mode: WeightMode,
    values: Vec<f64>,
}

impl SplitProfile {
    pub fn span(&self) -> Span {
        self.span
    }

    pub fn weight_mode(&self) -> WeightMode {
        self.weight_mode
    }

    /// `values()[n - 1]` is `D_n`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Divergence at split-after count `n`, for `1 <= n < L`.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }

    /// `(n, D_n)` pairs in increasing `n`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &d)| (i + 1, d))
    }
}

/// Computes the split profile of `span` from a single prefix-count pass.
pub fn split_profile(seq: &WeightedSequence, span: Span, weight_mode: WeightMode) -> Result<SplitProfile> {
    seq.check_span(span)?;
    if span.len() < 2 {
        return Err(Error::SpanTooShort);
    }
    Ok(SplitProfile { span, weight_mode, values: profile_values(seq, span, weight_mode) })
}

/// Span-level constants shared by every split evaluation.
struct SpanTotals {
    len: u64,
    mass: u64,
    totals: Vec<u64>,
    /// Symbols with nonzero total; all others are zero on both sides.
    support: Vec<usize>,
    /// Entropy of `totals / mass`, the mixture whenever the two sides are
    /// weighted in proportion to their mass.
    pooled_entropy: f64,
}

impl SpanTotals {
    fn divergence(&self, n: u64, left: &[u64], left_mass: u64, mode: WeightMode) -> f64 {
        let right_mass = self.mass - left_mass;
        if left_mass == 0 || right_mass == 0 {
            return 0.0;
        }
        let (ml, mr) = (left_mass as f64, right_mass as f64);
        let w_left = match mode {
            WeightMode::Positions => n as f64 / self.len as f64,
            WeightMode::Mass => ml / self.mass as f64,
        };
        let w_right = 1.0 - w_left;

        let mut sl = 0.0;
        let mut sr = 0.0;
        // Identical compositions give exactly zero; rounding would not.
        let mut same = true;
        for &s in &self.support {
            let right = self.totals[s] - left[s];
            sl += clogc(left[s]);
            sr += clogc(right);
            same &= u128::from(left[s]) * u128::from(right_mass) == u128::from(right) * u128::from(left_mass);
        }
        if same {
            return 0.0;
        }
        let h_left = ml.log2() - sl / ml;
        let h_right = mr.log2() - sr / mr;

        // Mixture equals the pooled distribution iff n / mass(left) = (L - n) / mass(right).
        let pooled = mode == WeightMode::Mass
            || u128::from(n) * u128::from(right_mass) == u128::from(self.len - n) * u128::from(left_mass);
        let h_mix = if pooled {
            self.pooled_entropy
        } else {
            let a = w_left / ml;
            let b = w_right / mr;
            -self
                .support
                .iter()
                .map(|&s| plogp(a * left[s] as f64 + b * (self.totals[s] - left[s]) as f64))
                .sum::<f64>()
        };
        (h_mix - w_left * h_left - w_right * h_right).max(0.0)
    }
}

fn profile_values(seq: &WeightedSequence, span: Span, mode: WeightMode) -> Vec<f64> {
    let len = span.len();
    let k = seq.alphabet().len();
    let totals = seq.tally(span).expect("span checked by caller").into_inner();
    let mass: u64 = totals.iter().sum();
    if mass == 0 {
        return vec![0.0; len - 1];
    }
    let support: Vec<usize> = (0..k).filter(|&s| totals[s] > 0).collect();
    let m = mass as f64;
    let pooled_entropy = -support.iter().map(|&s| plogp(totals[s] as f64 / m)).sum::<f64>();
    let ctx = SpanTotals { len: len as u64, mass, totals, support, pooled_entropy };

    // Left counts at the start of each chunk, i.e. before adding the position
    // that completes the chunk's first split.
    let splits = len - 1;
    let n_chunks = splits.div_ceil(CHUNK);
    let mut starts = Vec::with_capacity(n_chunks);
    let mut acc = vec![0u64; k];
    let mut acc_mass = 0u64;
    for c in 0..n_chunks {
        let first = c * CHUNK;
        if c > 0 {
            for i in (c - 1) * CHUNK..first {
                for &(s, cnt) in seq.entries(span.start + i) {
                    acc[s as usize] += cnt;
                    acc_mass += cnt;
                }
            }
        }
        starts.push((acc.clone(), acc_mass));
    }

    starts
        .into_par_iter()
        .enumerate()
        .flat_map_iter(|(c, (mut left, mut left_mass))| {
            let first = c * CHUNK;
            let last = (first + CHUNK).min(splits);
            let ctx = &ctx;
            (first..last)
                .map(move |i| {
                    for &(s, cnt) in seq.entries(span.start + i) {
                        left[s as usize] += cnt;
                        left_mass += cnt;
                    }
                    ctx.divergence(i as u64 + 1, &left, left_mass, mode)
                })
                .collect::<Vec<_>>()
        })
        .collect()
}
