//! Compositional segmentation of symbolic sequences.
//!
//! A sequence is a run of positions, each holding occurrence counts over a
//! fixed alphabet (one-hot for plain symbol streams such as speaker turns,
//! multi-count for binned streams such as pitch classes per bar). The
//! segmenter splits a span where the Jensen-Shannon divergence between the
//! symbol frequencies on either side peaks, keeps the split only when the
//! peak beats a shuffle baseline, and recurses into both halves.
//!
//! ```
//! use compseg::{read_tokens, segment_sequence, SegmentationConfig};
//!
//! let seq = read_tokens("A\nA\nA\nA\nB\nB\nB\nB\n").unwrap();
//! let root = segment_sequence(&seq, &SegmentationConfig::default()).unwrap();
//! assert_eq!(root.split_after, Some(4));
//! ```

pub mod alphabet;
pub mod divergence;
pub mod error;
pub mod formats;
pub mod ingest;
pub mod report;
pub mod segmentation;
pub mod sequence;
pub mod stream;
pub mod tree;

pub use alphabet::{build_alphabet, Alphabet};
pub use divergence::{jensen_shannon, shannon_entropy, split_profile, Distribution, SplitProfile, WeightMode};
pub use error::{Error, Result};
pub use formats::{read_counts, read_tokens, write_counts, write_tally, write_tokens};
pub use ingest::midi::{bin_to_bars, parse_smf, ChannelFilter, NoteEvent, TimeGrid, TimeSignature};
pub use ingest::play::{parse_play, play_to_sequence, Marker, MarkerKind, PlayScript, Speech};
pub use report::{emit_baseline, emit_profile, emit_tree, parse_tree, RunMetadata, TreeReport};
pub use segmentation::{best_split, segment, segment_sequence, shuffle_baseline, BaselineStats, SegmentationConfig};
pub use sequence::{one_hot, CountVector, Span, WeightedSequence};
pub use tree::SegmentNode;
