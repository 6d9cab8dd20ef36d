//! Standard MIDI File reading and per-bar pitch-class binning.
//!
//! Only what bar binning needs is decoded: note-on onsets and
//! time-signature meta events. Tempo is ignored because bars are metric.

use std::collections::BTreeSet;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::sequence::{CountVector, WeightedSequence};

pub const PITCH_CLASSES: [&str; 12] = ["C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"];

/// Zero-based channel conventionally reserved for unpitched percussion (GM channel 10).
pub const PERCUSSION_CHANNEL: u8 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoteEvent {
    pub tick: u64,
    pub pitch: u8,
    pub channel: u8,
    pub track: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeSignature {
    pub tick: u64,
    pub numerator: u8,
    /// The denominator is `2^denominator_power`.
    pub denominator_power: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeGrid {
    pub ticks_per_quarter: u16,
    /// Strictly increasing ticks, first entry at tick 0.
    pub signatures: Vec<TimeSignature>,
}

impl TimeGrid {
    /// Grid from raw signature events, which may be unsorted, repeated, or
    /// missing at tick 0 (4/4 is assumed there). The last event at a tick wins.
    pub fn new(ticks_per_quarter: u16, mut events: Vec<TimeSignature>) -> Result<Self> {
        if ticks_per_quarter == 0 {
            return Err(Error::MalformedMidi { offset: 12, message: "zero ticks per quarter".into() });
        }
        if let Some(bad) = events.iter().find(|s| s.numerator == 0) {
            return Err(Error::MalformedMidi {
                offset: 0,
                message: format!("time signature with zero numerator at tick {}", bad.tick),
            });
        }
        events.sort_by_key(|s| s.tick);
        let mut signatures: Vec<TimeSignature> = Vec::with_capacity(events.len() + 1);
        for sig in events {
            match signatures.last_mut() {
                Some(last) if last.tick == sig.tick => *last = sig,
                _ => signatures.push(sig),
            }
        }
        if signatures.first().is_none_or(|s| s.tick != 0) {
            signatures.insert(0, TimeSignature { tick: 0, numerator: 4, denominator_power: 2 });
        }
        Ok(Self { ticks_per_quarter, signatures })
    }

    fn bar_ticks(&self, sig: &TimeSignature) -> Result<u64> {
        let whole = u64::from(sig.numerator) * u64::from(self.ticks_per_quarter) * 4;
        let denom = 1u64.checked_shl(u32::from(sig.denominator_power)).ok_or(Error::UnrepresentableBarLength)?;
        if whole % denom != 0 {
            return Err(Error::UnrepresentableBarLength);
        }
        Ok(whole / denom)
    }

    /// Start ticks of every bar up to and including the one containing
    /// `last_tick`. A signature change that falls inside a bar cuts that bar
    /// short and starts a new one.
    pub fn bar_starts(&self, last_tick: u64) -> Result<Vec<u64>> {
        let mut starts = Vec::new();
        for (i, sig) in self.signatures.iter().enumerate() {
            if sig.tick > last_tick {
                break;
            }
            let len = self.bar_ticks(sig)?;
            let until = self.signatures.get(i + 1).map_or(u64::MAX, |s| s.tick);
            let mut t = sig.tick;
            while t < until && t <= last_tick {
                starts.push(t);
                t += len;
            }
        }
        Ok(starts)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &'static str) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            return Err(Error::Truncated { what, offset: self.bytes.len() });
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u8(&mut self, what: &'static str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &'static str) -> Result<u16> {
        let b = self.take(2, what)?;
        Ok(u16::from_be_bytes([b[0], b[1]]))
    }

    fn u32(&mut self, what: &'static str) -> Result<u32> {
        let b = self.take(4, what)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }

    /// Variable-length quantity: 7 bits per byte, high bit set on all but the last, at most 4 bytes.
    fn vlq(&mut self, what: &'static str) -> Result<u64> {
        let start = self.pos;
        let mut value = 0u64;
        for _ in 0..4 {
            let b = self.u8(what)?;
            value = (value << 7) | u64::from(b & 0x7f);
            if b & 0x80 == 0 {
                return Ok(value);
            }
        }
        Err(Error::MalformedMidi { offset: start, message: "variable-length quantity longer than 4 bytes".into() })
    }
}

fn channel_data_len(status: u8) -> usize {
    match status & 0xf0 {
        0xc0 | 0xd0 => 1,
        _ => 2,
    }
}

fn parse_track(
    data: &[u8],
    base: usize,
    track: usize,
    notes: &mut Vec<NoteEvent>,
    signatures: &mut Vec<TimeSignature>,
) -> Result<()> {
    let mut r = Reader { bytes: data, pos: 0 };
    let mut tick = 0u64;
    let mut running: Option<u8> = None;
    let malformed = |offset: usize, message: String| Error::MalformedMidi { offset: base + offset, message };
    let shift = |e: Error| match e {
        Error::Truncated { what, offset } => Error::Truncated { what, offset: base + offset },
        Error::MalformedMidi { offset, message } => Error::MalformedMidi { offset: base + offset, message },
        other => other,
    };

    while r.pos < data.len() {
        tick += r.vlq("event delta time").map_err(shift)?;
        let at = r.pos;
        let first = r.u8("event").map_err(shift)?;
        match first {
            0xff => {
                running = None;
                let kind = r.u8("meta event").map_err(shift)?;
                let len = r.vlq("meta event length").map_err(shift)? as usize;
                let body = r.take(len, "meta event").map_err(shift)?;
                match kind {
                    0x2f => break,
                    0x58 => {
                        if len < 2 {
                            return Err(malformed(at, "short time signature".into()));
                        }
                        signatures.push(TimeSignature { tick, numerator: body[0], denominator_power: body[1] });
                    }
                    _ => {}
                }
            }
            0xf0 | 0xf7 => {
                running = None;
                let len = r.vlq("sysex length").map_err(shift)? as usize;
                r.take(len, "sysex event").map_err(shift)?;
            }
            0xf1..=0xfe => return Err(malformed(at, format!("unexpected status byte {first:#04x}"))),
            _ => {
                let (status, data_bytes) = if first & 0x80 != 0 {
                    running = Some(first);
                    (first, r.take(channel_data_len(first), "channel event").map_err(shift)?.to_vec())
                } else {
                    let status = running.ok_or_else(|| malformed(at, "data byte without running status".into()))?;
                    let mut bytes = vec![first];
                    bytes.extend_from_slice(r.take(channel_data_len(status) - 1, "channel event").map_err(shift)?);
                    (status, bytes)
                };
                if status & 0xf0 == 0x90 && data_bytes[1] > 0 {
                    notes.push(NoteEvent { tick, pitch: data_bytes[0] & 0x7f, channel: status & 0x0f, track });
                }
            }
        }
    }
    Ok(())
}

/// Reads note onsets and the metric grid from a format 0 or 1 SMF.
///
/// Onsets from all tracks are merged by tick; ties keep track order, then
/// file order within a track.
pub fn parse_smf(bytes: &[u8]) -> Result<(Vec<NoteEvent>, TimeGrid)> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4, "header chunk")? != b"MThd" {
        return Err(Error::MalformedMidi { offset: 0, message: "missing MThd header".into() });
    }
    let header_len = r.u32("header chunk")? as usize;
    if header_len < 6 {
        return Err(Error::MalformedMidi { offset: 4, message: format!("header length {header_len}") });
    }
    let format = r.u16("header chunk")?;
    let _declared_tracks = r.u16("header chunk")?;
    let division = r.u16("header chunk")?;
    r.take(header_len - 6, "header chunk")?;
    if format > 1 {
        return Err(Error::MalformedMidi { offset: 8, message: format!("unsupported SMF format {format}") });
    }
    if division & 0x8000 != 0 {
        return Err(Error::SmpteUnsupported);
    }

    let mut notes = Vec::new();
    let mut signatures = Vec::new();
    let mut track = 0;
    while r.pos < bytes.len() {
        let id = r.take(4, "chunk header")?;
        let len = r.u32("chunk header")? as usize;
        let base = r.pos;
        let body = r.take(len, if id == b"MTrk" { "track chunk" } else { "chunk" })?;
        if id == b"MTrk" {
            parse_track(body, base, track, &mut notes, &mut signatures)?;
            track += 1;
        }
    }
    notes.sort_by_key(|n| n.tick);
    Ok((notes, TimeGrid::new(division, signatures)?))
}

/// Which channels contribute onsets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ChannelFilter {
    /// Every channel except [`PERCUSSION_CHANNEL`].
    #[default]
    Pitched,
    All,
    Only(BTreeSet<u8>),
}

impl ChannelFilter {
    pub fn accepts(&self, channel: u8) -> bool {
        match self {
            ChannelFilter::Pitched => channel != PERCUSSION_CHANNEL,
            ChannelFilter::All => true,
            ChannelFilter::Only(set) => set.contains(&channel),
        }
    }
}

pub fn pitch_class_alphabet() -> Alphabet {
    Alphabet::new(PITCH_CLASSES).expect("static labels are distinct")
}

/// Counts onsets per pitch class in each bar, from bar 1 (at tick 0)
/// through the bar holding the last onset. Positions are labelled with
/// 1-based bar numbers.
pub fn bin_to_bars(events: &[NoteEvent], grid: &TimeGrid, filter: &ChannelFilter) -> Result<WeightedSequence> {
    let kept: Vec<&NoteEvent> = events.iter().filter(|e| filter.accepts(e.channel)).collect();
    let last = kept.iter().map(|e| e.tick).max().ok_or(Error::NoOnsets)?;
    let starts = grid.bar_starts(last)?;
    let mut bars = vec![[0u64; 12]; starts.len()];
    for e in kept {
        let bar = starts.partition_point(|&s| s <= e.tick) - 1;
        bars[bar][usize::from(e.pitch % 12)] += 1;
    }
    let rows: Vec<CountVector> = bars.iter().map(|b| CountVector::new(b.to_vec())).collect();
    let labels = (1..=rows.len() as i64).collect();
    WeightedSequence::from_counts(pitch_class_alphabet(), &rows)?.with_labels(labels)
}
