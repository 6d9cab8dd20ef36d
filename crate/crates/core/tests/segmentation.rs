mod common;

use compseg::{
    emit_tree, parse_tree, segment_sequence, split_profile, RunMetadata, SegmentNode, SegmentationConfig, Span,
};
use proptest::prelude::*;

use common::*;

fn accepted_spans(root: &SegmentNode) -> Vec<(Span, usize)> {
    let mut out = Vec::new();
    root.walk(0, &mut |node, _| {
        if let Some(b) = node.boundary() {
            out.push((node.span, b));
        }
    });
    out
}

fn rows_strategy() -> impl Strategy<Value = Vec<Vec<u64>>> {
    (any::<u64>(), 2usize..120).prop_map(|(seed, max_len)| random_rows(&mut rng(seed), max_len, 5, 4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_is_well_formed_and_leaves_tile(rows in rows_strategy(), seed in any::<u64>()) {
        let seq = sequence_from_rows(&rows);
        let config = SegmentationConfig { seed, ..Default::default() };
        let root = segment_sequence(&seq, &config).unwrap();
        root.validate().unwrap();
        let leaves = root.leaves();
        prop_assert_eq!(leaves.first().unwrap().start, 0);
        prop_assert_eq!(leaves.last().unwrap().end, rows.len());
        for w in leaves.windows(2) {
            prop_assert_eq!(w[0].end, w[1].start);
        }
        root.walk(0, &mut |node, _| {
            if node.span.len() < config.min_split_length {
                assert!(node.is_leaf() && node.d_max.is_none());
            }
            if let (Some(d), Some(b)) = (node.d_max, node.baseline) {
                assert_eq!(node.significant, d > b.threshold(config.threshold_multiplier));
            }
        });
    }

    #[test]
    fn raising_threshold_prunes_tree(rows in rows_strategy(), t in 0.0f64..3.0, dt in 0.0f64..3.0) {
        let seq = sequence_from_rows(&rows);
        let low = segment_sequence(&seq, &SegmentationConfig { threshold_multiplier: t, ..Default::default() }).unwrap();
        let high = segment_sequence(&seq, &SegmentationConfig { threshold_multiplier: t + dt, ..Default::default() }).unwrap();
        let low_splits = accepted_spans(&low);
        for split in accepted_spans(&high) {
            prop_assert!(low_splits.contains(&split), "{:?} missing at lower threshold", split);
        }
    }

    #[test]
    fn reruns_are_identical(rows in rows_strategy(), seed in any::<u64>()) {
        let seq = sequence_from_rows(&rows);
        let config = SegmentationConfig { seed, ..Default::default() };
        let a = segment_sequence(&seq, &config).unwrap();
        let b = segment_sequence(&seq, &config).unwrap();
        prop_assert_eq!(&a, &b);
        let meta = RunMetadata::new(&config, &seq);
        prop_assert_eq!(emit_tree(&a, &meta, &[]), emit_tree(&b, &meta, &[]));
    }

    #[test]
    fn accepted_split_is_profile_argmax(rows in rows_strategy()) {
        let seq = sequence_from_rows(&rows);
        let config = SegmentationConfig::default();
        let root = segment_sequence(&seq, &config).unwrap();
        for (span, boundary) in accepted_spans(&root) {
            let profile = split_profile(&seq, span, config.weight_mode).unwrap();
            let n = boundary - span.start;
            let best = profile.get(n).unwrap();
            prop_assert!(profile.iter().all(|(m, d)| d < best || (d == best && m >= n)));
        }
    }
}

#[test]
fn planted_change_point_found_in_long_sequence() {
    let mut r = rng(11);
    let mut rows = multinomial_rows(&mut r, &[0.6, 0.3, 0.1], 3000);
    rows.extend(multinomial_rows(&mut r, &[0.1, 0.3, 0.6], 2000));
    let seq = sequence_from_rows(&rows);
    let root = segment_sequence(&seq, &SegmentationConfig::default()).unwrap();
    assert!(root.significant);
    assert!(root.boundary().unwrap().abs_diff(3000) <= 30);
}

#[test]
fn tree_json_round_trips() {
    let mut r = rng(3);
    let rows = random_rows(&mut r, 300, 4, 3);
    let seq = sequence_from_rows(&rows);
    let config = SegmentationConfig::default();
    let root = segment_sequence(&seq, &config).unwrap();
    let meta = RunMetadata::new(&config, &seq);
    let text = emit_tree(&root, &meta, &[]);
    let report = parse_tree(&text).unwrap();
    assert_eq!(report.root, root);
    assert_eq!(emit_tree(&report.root, &report.meta, &report.markers), text);
}
