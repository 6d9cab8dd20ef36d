use crate::error::{Error, Result};
use crate::segmentation::BaselineStats;
use crate::sequence::Span;

/// One node of the recursive segmentation.
///
/// `split_after` counts positions in the left child and is present exactly
/// when the node has children.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentNode {
    pub span: Span,
    pub d_max: Option<f64>,
    pub split_after: Option<usize>,
    /// Display label of the last position of the left child.
    pub split_label: Option<i64>,
    pub baseline: Option<BaselineStats>,
    pub significant: bool,
    pub children: Option<Box<(SegmentNode, SegmentNode)>>,
}

impl SegmentNode {
    pub fn leaf(span: Span) -> Self {
        Self {
            span,
            d_max: None,
            split_after: None,
            split_label: None,
            baseline: None,
            significant: false,
            children: None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    pub fn children(&self) -> Option<(&SegmentNode, &SegmentNode)> {
        self.children.as_deref().map(|(l, r)| (l, r))
    }

    /// Absolute boundary (count of positions before it) of this node's split.
    pub fn boundary(&self) -> Option<usize> {
        self.children.as_ref().and(self.split_after.map(|n| self.span.start + n))
    }

    /// Leaf spans in sequence order.
    pub fn leaves(&self) -> Vec<Span> {
        let mut out = Vec::new();
        self.walk(0, &mut |node, _| {
            if node.is_leaf() {
                out.push(node.span);
            }
        });
        out
    }

    /// Nodes in pre-order with their depth (root = 0).
    pub fn walk<'a, F: FnMut(&'a SegmentNode, usize)>(&'a self, depth: usize, f: &mut F) {
        f(self, depth);
        if let Some((l, r)) = self.children() {
            l.walk(depth + 1, f);
            r.walk(depth + 1, f);
        }
    }

    /// Split boundaries of the nodes at `depth`, left to right. Depth 0
    /// yields the first segmentation level.
    pub fn boundaries_at_depth(&self, depth: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.walk(0, &mut |node, d| {
            if d == depth {
                out.extend(node.boundary());
            }
        });
        out
    }

    /// Same as [`Self::boundaries_at_depth`] but reported as display labels.
    pub fn labels_at_depth(&self, depth: usize) -> Vec<i64> {
        let mut out = Vec::new();
        self.walk(0, &mut |node, d| {
            if d == depth && node.children.is_some() {
                out.extend(node.split_label);
            }
        });
        out
    }

    pub fn depth(&self) -> usize {
        let mut max = 0;
        self.walk(0, &mut |_, d| max = max.max(d));
        max
    }

    /// Drops everything below `levels` split levels. Nodes at the cap keep
    /// their statistics but lose their children and split point.
    pub fn truncated(&self, levels: usize) -> SegmentNode {
        let mut node = self.clone();
        node.truncate_in_place(levels);
        node
    }

    fn truncate_in_place(&mut self, levels: usize) {
        if levels == 0 {
            self.children = None;
            self.split_after = None;
            self.split_label = None;
        } else if let Some(children) = self.children.as_mut() {
            children.0.truncate_in_place(levels - 1);
            children.1.truncate_in_place(levels - 1);
        }
    }

    /// Checks the structural invariants of the subtree.
    pub fn validate(&self) -> Result<()> {
        let span = self.span;
        let at = |msg: &str| Error::Schema(format!("node [{}, {}): {msg}", span.start, span.end));
        if span.start >= span.end {
            return Err(at("empty span"));
        }
        if let Some(d) = self.d_max {
            if d.is_nan() || d < 0.0 {
                return Err(at("negative d_max"));
            }
        }
        if let Some(b) = &self.baseline {
            if !(b.mean >= 0.0 && b.sigma >= 0.0) || b.replicates == 0 {
                return Err(at("invalid baseline"));
            }
        }
        match (self.children(), self.split_after) {
            (None, _) => Ok(()),
            (Some(_), None) => Err(at("children without split_after")),
            (Some((l, r)), Some(n)) => {
                if !self.significant {
                    return Err(at("children under an insignificant node"));
                }
                if span.len() < 3 {
                    return Err(at("split of a span shorter than 3"));
                }
                if n == 0 || n >= span.len() {
                    return Err(at("split_after outside the span interior"));
                }
                let (ls, rs) = span.split_at(n);
                if l.span != ls || r.span != rs {
                    return Err(at("children do not partition the span"));
                }
                l.validate()?;
                r.validate()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split(span: Span, n: usize, l: SegmentNode, r: SegmentNode) -> SegmentNode {
        SegmentNode {
            span,
            d_max: Some(0.5),
            split_after: Some(n),
            split_label: Some((span.start + n) as i64),
            baseline: Some(BaselineStats { mean: 0.1, sigma: 0.05, replicates: 1, seed: 0 }),
            significant: true,
            children: Some(Box::new((l, r))),
        }
    }

    fn sample() -> SegmentNode {
        let s = |a, b| Span { start: a, end: b };
        split(
            s(0, 10),
            4,
            split(s(0, 4), 1, SegmentNode::leaf(s(0, 1)), SegmentNode::leaf(s(1, 4))),
            SegmentNode::leaf(s(4, 10)),
        )
    }

    #[test]
    fn boundaries_and_leaves() {
        let t = sample();
        t.validate().unwrap();
        assert_eq!(t.boundaries_at_depth(0), [4]);
        assert_eq!(t.boundaries_at_depth(1), [1]);
        assert_eq!(t.labels_at_depth(1), [1]);
        assert!(t.boundaries_at_depth(2).is_empty());
        let leaves: Vec<(usize, usize)> = t.leaves().iter().map(|s| (s.start, s.end)).collect();
        assert_eq!(leaves, [(0, 1), (1, 4), (4, 10)]);
        assert_eq!(t.depth(), 2);
    }

    #[test]
    fn truncation_keeps_statistics() {
        let t = sample().truncated(1);
        t.validate().unwrap();
        let (left, _) = t.children().unwrap();
        assert!(left.is_leaf());
        assert!(left.split_after.is_none());
        assert!(left.significant);
        assert_eq!(sample().truncated(0).leaves().len(), 1);
    }

    #[test]
    fn validate_rejects_bad_partition() {
        let mut t = sample();
        t.split_after = Some(5);
        assert!(t.validate().is_err());
        let mut t = sample();
        t.significant = false;
        assert!(t.validate().is_err());
    }
}
