//! Serialization of segmentation results.
//!
//! Tree documents are compact JSON with a fixed key order. Reals are written
//! in decimal exponent notation with at least 12 significant digits (more
//! when needed to round-trip exactly), so a document re-emitted after
//! parsing is byte-identical.

use std::fmt::Write as _;

use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

use crate::divergence::{SplitProfile, WeightMode};
use crate::error::{Error, Result};
use crate::formats::write_counts;
use crate::ingest::play::Marker;
use crate::segmentation::{BaselineStats, SegmentationConfig};
use crate::sequence::{Span, WeightedSequence};
use crate::stream::GENERATOR;
use crate::tree::SegmentNode;

pub const TOOL_NAME: &str = "compseg";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

const MIN_SIGNIFICANT_DIGITS: usize = 12;

/// Shortest round-trip representation, padded to 12 significant digits.
pub fn format_real(x: f64) -> String {
    assert!(x.is_finite(), "non-finite value {x} in report");
    let x = if x == 0.0 { 0.0 } else { x };
    let shortest = format!("{x:e}");
    let mantissa = shortest.split('e').next().unwrap_or_default();
    let digits = mantissa.chars().filter(char::is_ascii_digit).count();
    if digits >= MIN_SIGNIFICANT_DIGITS {
        shortest
    } else {
        format!("{:.*e}", MIN_SIGNIFICANT_DIGITS - 1, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Real(f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom("non-finite real"));
        }
        RawValue::from_string(format_real(self.0))
            .map_err(S::Error::custom)?
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let x = f64::deserialize(deserializer)?;
        if x.is_finite() {
            Ok(Real(x))
        } else {
            Err(D::Error::custom("non-finite real"))
        }
    }
}

/// Provenance block embedded in every tree document.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetadata {
    pub tool: String,
    pub version: String,
    pub config: SegmentationConfig,
    /// `sha256:` digest of the sequence in canonical `counts` form.
    pub input_digest: String,
    pub generator: String,
}

impl RunMetadata {
    pub fn new(config: &SegmentationConfig, seq: &WeightedSequence) -> Self {
        Self {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            config: config.clone(),
            input_digest: sequence_digest(seq),
            generator: GENERATOR.into(),
        }
    }
}

pub fn sequence_digest(seq: &WeightedSequence) -> String {
    let digest = Sha256::digest(write_counts(seq).as_bytes());
    let mut out = String::from("sha256:");
    for b in digest.iter() {
        write!(out, "{b:02x}").unwrap();
    }
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    min_split_length: usize,
    threshold_multiplier: Real,
    shuffle_replicates: usize,
    seed: u64,
    max_depth: usize,
    weight_mode: WeightMode,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetaDoc {
    tool: String,
    version: String,
    config: ConfigDoc,
    input_digest: String,
    generator: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BaselineDoc {
    mean: Real,
    sigma: Real,
    replicates: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    start: usize,
    end: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    split_after: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    split_label: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d_max: Option<Real>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    baseline: Option<BaselineDoc>,
    significant: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    children: Option<Vec<NodeDoc>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    meta: MetaDoc,
    markers: Vec<Marker>,
    node: NodeDoc,
}

impl From<&SegmentationConfig> for ConfigDoc {
    fn from(c: &SegmentationConfig) -> Self {
        Self {
            min_split_length: c.min_split_length,
            threshold_multiplier: Real(c.threshold_multiplier),
            shuffle_replicates: c.shuffle_replicates,
            seed: c.seed,
            max_depth: c.max_depth,
            weight_mode: c.weight_mode,
        }
    }
}

impl From<ConfigDoc> for SegmentationConfig {
    fn from(c: ConfigDoc) -> Self {
        Self {
            min_split_length: c.min_split_length,
            threshold_multiplier: c.threshold_multiplier.0,
            shuffle_replicates: c.shuffle_replicates,
            seed: c.seed,
            max_depth: c.max_depth,
            weight_mode: c.weight_mode,
        }
    }
}

impl From<&SegmentNode> for NodeDoc {
    fn from(n: &SegmentNode) -> Self {
        Self {
            start: n.span.start,
            end: n.span.end,
            split_after: n.split_after,
            split_label: n.split_label,
            d_max: n.d_max.map(Real),
            baseline: n.baseline.map(|b| BaselineDoc {
                mean: Real(b.mean),
                sigma: Real(b.sigma),
                replicates: b.replicates,
            }),
            significant: n.significant,
            children: n.children().map(|(l, r)| vec![l.into(), r.into()]),
        }
    }
}

impl NodeDoc {
    fn into_node(self, seed: u64) -> Result<SegmentNode> {
        let span = Span::new(self.start, self.end)
            .map_err(|_| Error::Schema(format!("empty span [{}, {})", self.start, self.end)))?;
        let children = match self.children {
            None => None,
            Some(children) => {
                let [l, r]: [NodeDoc; 2] = children
                    .try_into()
                    .map_err(|c: Vec<NodeDoc>| Error::Schema(format!("{} children, expected 2", c.len())))?;
                Some(Box::new((l.into_node(seed)?, r.into_node(seed)?)))
            }
        };
        Ok(SegmentNode {
            span,
            d_max: self.d_max.map(|r| r.0),
            split_after: self.split_after,
            split_label: self.split_label,
            baseline: self.baseline.map(|b| BaselineStats {
                mean: b.mean.0,
                sigma: b.sigma.0,
                replicates: b.replicates,
                seed,
            }),
            significant: self.significant,
            children,
        })
    }
}

/// A parsed tree document.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeReport {
    pub meta: RunMetadata,
    pub markers: Vec<Marker>,
    pub root: SegmentNode,
}

pub fn emit_tree(root: &SegmentNode, meta: &RunMetadata, markers: &[Marker]) -> String {
    let doc = TreeDoc {
        meta: MetaDoc {
            tool: meta.tool.clone(),
            version: meta.version.clone(),
            config: (&meta.config).into(),
            input_digest: meta.input_digest.clone(),
            generator: meta.generator.clone(),
        },
        markers: markers.to_vec(),
        node: root.into(),
    };
    let mut out = serde_json::to_string(&doc).expect("tree values are finite");
    out.push('\n');
    out
}

/// Parses and validates a tree document.
pub fn parse_tree(text: &str) -> Result<TreeReport> {
    let doc: TreeDoc = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let config: SegmentationConfig = doc.meta.config.into();
    let root = doc.node.into_node(config.seed)?;
    root.validate()?;
    Ok(TreeReport {
        meta: RunMetadata {
            tool: doc.meta.tool,
            version: doc.meta.version,
            config,
            input_digest: doc.meta.input_digest,
            generator: doc.meta.generator,
        },
        markers: doc.markers,
        root,
    })
}

pub const PROFILE_HEADER: &str = "n,d,mean,mean_plus_sigma,mean_minus_sigma";

/// One CSV row per interior split, with the baseline band repeated on each row.
pub fn emit_profile(profile: &SplitProfile, baseline: &BaselineStats) -> String {
    let mean = format_real(baseline.mean);
    let upper = format_real(baseline.mean + baseline.sigma);
    let lower = format_real(baseline.mean - baseline.sigma);
    let mut out = String::with_capacity(64 * (profile.len() + 1));
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for (n, d) in profile.iter() {
        writeln!(out, "{n},{},{mean},{upper},{lower}", format_real(d)).unwrap();
    }
    out
}

#[derive(Serialize)]
struct BaselineReport {
    start: usize,
    end: usize,
    mean: Real,
    sigma: Real,
    replicates: usize,
    seed: u64,
}

pub fn emit_baseline(baseline: &BaselineStats, span: Span) -> String {
    let doc = BaselineReport {
        start: span.start,
        end: span.end,
        mean: Real(baseline.mean),
        sigma: Real(baseline.sigma),
        replicates: baseline.replicates,
        seed: baseline.seed,
    };
    let mut out = serde_json::to_string(&doc).expect("baseline values are finite");
    out.push('\n');
    out
}
