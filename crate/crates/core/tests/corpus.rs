mod common;

use compseg::ingest::play::{parse_markers, write_markers};
use compseg::{
    bin_to_bars, parse_play, parse_smf, play_to_sequence, read_counts, read_tokens, segment_sequence, write_counts,
    write_tokens, ChannelFilter, MarkerKind, SegmentationConfig,
};

use common::data_path;

fn play_text() -> String {
    std::fs::read_to_string(data_path("masque.play")).unwrap()
}

#[test]
fn play_ingest_round_trips_through_tokens() {
    let script = parse_play(&play_text()).unwrap();
    let (seq, markers) = play_to_sequence(&script).unwrap();
    assert_eq!(seq.len(), 590);
    let reread = read_tokens(&write_tokens(&script.speakers())).unwrap();
    assert_eq!(reread, seq);
    assert_eq!(parse_markers(&write_markers(&markers)).unwrap(), markers);
}

#[test]
fn play_markers_follow_scene_headings() {
    let script = parse_play(&play_text()).unwrap();
    let scenes: Vec<usize> =
        script.markers.iter().filter(|m| m.kind == MarkerKind::Scene).map(|m| m.position).collect();
    assert_eq!(scenes, [0, 40, 70, 130, 200, 245, 325, 385, 435, 490, 530]);
    let acts = script.markers.iter().filter(|m| m.kind == MarkerKind::Act).count();
    assert_eq!(acts, 5);
    // Front matter and stage directions never become speakers.
    assert!(!script.speakers().iter().any(|s| s.contains("PERSONAE") || s.starts_with("ENTER")));
}

#[test]
fn play_parse_ignores_line_endings() {
    let text = play_text();
    let crlf = text.replace('\n', "\r\n");
    assert_eq!(parse_play(&crlf).unwrap(), parse_play(&text).unwrap());
}

#[test]
fn midi_ingest_round_trips_through_counts() {
    let bytes = std::fs::read(data_path("sonatina.mid")).unwrap();
    let (events, grid) = parse_smf(&bytes).unwrap();
    let seq = bin_to_bars(&events, &grid, &ChannelFilter::default()).unwrap();
    assert_eq!(seq.len(), 70);
    assert_eq!(seq.total_mass(), events.len() as u64);
    let reread = read_counts(&write_counts(&seq)).unwrap();
    let labels = (1..=seq.len() as i64).collect();
    assert_eq!(reread.with_labels(labels).unwrap(), seq);
}

#[test]
fn corpus_trees_segment_at_structural_seams() {
    let script = parse_play(&play_text()).unwrap();
    let (seq, _) = play_to_sequence(&script).unwrap();
    let root = segment_sequence(&seq, &SegmentationConfig::default()).unwrap();
    root.validate().unwrap();
    assert_eq!(root.boundaries_at_depth(0), [129]);
    assert_eq!(root.boundaries_at_depth(1), [69, 435]);

    let bytes = std::fs::read(data_path("sonatina.mid")).unwrap();
    let (events, grid) = parse_smf(&bytes).unwrap();
    let seq = bin_to_bars(&events, &grid, &ChannelFilter::default()).unwrap();
    let root = segment_sequence(&seq, &SegmentationConfig::default()).unwrap();
    assert_eq!(root.labels_at_depth(0), [36]);
    assert_eq!(root.labels_at_depth(1), [26, 54]);
}
