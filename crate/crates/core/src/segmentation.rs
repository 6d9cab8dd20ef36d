//! Split selection, the shuffle baseline, and the recursive driver.

use rayon::prelude::*;

use crate::divergence::{split_profile, SplitProfile, WeightMode};
use crate::error::{Error, Result};
use crate::sequence::{Span, WeightedSequence};
use crate::stream;
use crate::tree::SegmentNode;

/// Mean and dispersion of `D_n` over shuffled copies of a span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineStats {
    pub mean: f64,
    pub sigma: f64,
    pub replicates: usize,
    pub seed: u64,
}

impl BaselineStats {
    /// Smallest `d_max` that does not pass the significance test at multiplier `t`.
    pub fn threshold(&self, t: f64) -> f64 {
        self.mean + t * self.sigma
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationConfig {
    /// Spans shorter than this are never split.
    pub min_split_length: usize,
    /// A split is significant when `d_max > mean + threshold_multiplier * sigma`.
    pub threshold_multiplier: f64,
    pub shuffle_replicates: usize,
    pub seed: u64,
    /// Nodes at this depth (root = 0) are leaves.
    pub max_depth: usize,
    pub weight_mode: WeightMode,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        Self {
            min_split_length: 3,
            threshold_multiplier: 1.0,
            shuffle_replicates: 10,
            seed: 42,
            max_depth: 32,
            weight_mode: WeightMode::Positions,
        }
    }
}

impl SegmentationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_split_length < 2 {
            return Err(Error::InvalidConfig("min_split_length must be at least 2".into()));
        }
        if !(self.threshold_multiplier.is_finite() && self.threshold_multiplier >= 0.0) {
            return Err(Error::InvalidConfig("threshold_multiplier must be a finite value >= 0".into()));
        }
        if self.shuffle_replicates < 1 {
            return Err(Error::InvalidConfig("shuffle_replicates must be at least 1".into()));
        }
        if self.max_depth < 1 {
            return Err(Error::InvalidConfig("max_depth must be at least 1".into()));
        }
        Ok(())
    }
}

/// Leftmost split attaining the maximum divergence, as `(n, d_max)`.
pub fn best_split(profile: &SplitProfile) -> Result<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (n, d) in profile.iter() {
        if best.is_none_or(|(_, b)| d > b) {
            best = Some((n, d));
        }
    }
    best.ok_or(Error::EmptyProfile)
}

/// Pools the interior-split profiles of `shuffle_replicates` random
/// permutations of the span's positions and returns their mean and
/// population standard deviation.
pub fn shuffle_baseline(seq: &WeightedSequence, span: Span, config: &SegmentationConfig) -> Result<BaselineStats> {
    config.validate()?;
    seq.check_span(span)?;
    if span.len() < 2 {
        return Err(Error::SpanTooShort);
    }
    let replicates: Vec<Vec<f64>> = (0..config.shuffle_replicates)
        .into_par_iter()
        .map(|r| {
            let mut order: Vec<usize> = (span.start..span.end).collect();
            stream::shuffle(&mut order, &mut stream::replicate_rng(config.seed, span, r as u64));
            let shuffled = seq.gather(&order);
            split_profile(&shuffled, shuffled.full_span(), config.weight_mode).map(|p| p.values().to_vec())
        })
        .collect::<Result<_>>()?;

    let count = replicates.iter().map(Vec::len).sum::<usize>() as f64;
    let mean = replicates.iter().flatten().sum::<f64>() / count;
    let var = replicates.iter().flatten().map(|d| (d - mean) * (d - mean)).sum::<f64>() / count;
    Ok(BaselineStats {
        mean,
        sigma: var.sqrt(),
        replicates: config.shuffle_replicates,
        seed: config.seed,
    })
}

/// Recursively segments `span`, splitting each node at its maximal
/// divergence while the maximum beats the shuffle baseline.
pub fn segment(seq: &WeightedSequence, span: Span, config: &SegmentationConfig) -> Result<SegmentNode> {
    config.validate()?;
    seq.check_span(span)?;
    segment_node(seq, span, config, 0)
}

pub fn segment_sequence(seq: &WeightedSequence, config: &SegmentationConfig) -> Result<SegmentNode> {
    segment(seq, seq.full_span(), config)
}

fn segment_node(seq: &WeightedSequence, span: Span, config: &SegmentationConfig, depth: usize) -> Result<SegmentNode> {
    if span.len() < config.min_split_length || depth >= config.max_depth {
        return Ok(SegmentNode::leaf(span));
    }
    let (profile, baseline) = rayon::join(
        || split_profile(seq, span, config.weight_mode),
        || shuffle_baseline(seq, span, config),
    );
    let (n, d_max) = best_split(&profile?)?;
    let baseline = baseline?;
    let significant = d_max > baseline.threshold(config.threshold_multiplier);

    let mut node = SegmentNode {
        span,
        d_max: Some(d_max),
        split_after: None,
        split_label: None,
        baseline: Some(baseline),
        significant,
        children: None,
    };
    if significant {
        let (left, right) = span.split_at(n);
        let (l, r) = rayon::join(
            || segment_node(seq, left, config, depth + 1),
            || segment_node(seq, right, config, depth + 1),
        );
        node.split_after = Some(n);
        node.split_label = Some(seq.label(span.start + n - 1));
        node.children = Some(Box::new((l?, r?)));
    }
    Ok(node)
}
