//! Speaker-turn extraction from play scripts.
//!
//! Accepted layout, one item per line (surrounding whitespace ignored):
//!
//! ```text
//! ACT I
//! SCENE I. Venice. A street.
//! RODERIGO.
//! Tush! never tell me; I take it much unkindly
//! [Exit.]
//! IAGO.
//! 'Sblood, but you will not hear me:
//! ```
//!
//! A speaker heading is a whole line of upper-case letters, spaces and
//! apostrophes ending in a period. Everything up to the next heading or
//! act/scene line is the speech text. Lines in square brackets are stage
//! directions and are dropped; so is anything before the first heading.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::alphabet::build_alphabet;
use crate::error::{Error, Result};
use crate::sequence::{one_hot, WeightedSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkerKind {
    Act,
    Scene,
}

impl fmt::Display for MarkerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MarkerKind::Act => "act",
            MarkerKind::Scene => "scene",
        })
    }
}

impl FromStr for MarkerKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "act" => Ok(MarkerKind::Act),
            "scene" => Ok(MarkerKind::Scene),
            other => Err(format!("unknown marker kind {other:?}")),
        }
    }
}

/// An act or scene heading, anchored at the index of the first speech at or after it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marker {
    pub kind: MarkerKind,
    pub label: String,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Speech {
    pub speaker: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayScript {
    pub speeches: Vec<Speech>,
    pub markers: Vec<Marker>,
}

impl PlayScript {
    pub fn speakers(&self) -> Vec<&str> {
        self.speeches.iter().map(|s| s.speaker.as_str()).collect()
    }
}

fn is_roman(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| "IVXLCDM".contains(c))
}

/// `ACT <roman>` with an optional trailing period.
fn act_heading(line: &str) -> Option<&str> {
    let rest = line.strip_prefix("ACT ")?.trim();
    let numeral = rest.strip_suffix('.').unwrap_or(rest);
    is_roman(numeral).then_some(numeral)
}

/// `SCENE <roman>[. description]`.
fn scene_heading(line: &str) -> Option<&str> {
    let rest = line.strip_prefix("SCENE ")?.trim_start();
    let end = rest.find(|c: char| !"IVXLCDM".contains(c)).unwrap_or(rest.len());
    let (numeral, tail) = rest.split_at(end);
    let ok = is_roman(numeral) && (tail.is_empty() || tail.starts_with('.'));
    ok.then_some(numeral)
}

fn speaker_heading(line: &str) -> Option<String> {
    let name = line.strip_suffix('.')?;
    let valid = name.chars().any(char::is_alphabetic)
        && name
            .chars()
            .all(|c| c == ' ' || c == '\'' || (c.is_alphabetic() && !c.is_lowercase()));
    valid.then(|| name.split_whitespace().collect::<Vec<_>>().join(" ").to_uppercase())
}

fn strip_directions(line: &str) -> String {
    let mut out = String::with_capacity(line.len());
    let mut depth = 0usize;
    for c in line.chars() {
        match c {
            '[' => depth += 1,
            ']' if depth > 0 => depth -= 1,
            _ if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn parse_play(text: &str) -> Result<PlayScript> {
    let mut speeches: Vec<Speech> = Vec::new();
    let mut markers = Vec::new();
    let mut open = false;
    let mut in_direction = false;

    for raw in text.lines() {
        let line = raw.trim();
        if in_direction {
            if line.contains(']') {
                in_direction = false;
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            in_direction = !line.contains(']');
            continue;
        }
        if let Some(label) = act_heading(line) {
            markers.push(Marker { kind: MarkerKind::Act, label: label.into(), position: speeches.len() });
            open = false;
        } else if let Some(label) = scene_heading(line) {
            markers.push(Marker { kind: MarkerKind::Scene, label: label.into(), position: speeches.len() });
            open = false;
        } else if let Some(speaker) = speaker_heading(line) {
            speeches.push(Speech { speaker, text: String::new() });
            open = true;
        } else if open {
            let line = strip_directions(line);
            if !line.is_empty() {
                let speech = speeches.last_mut().expect("open speech");
                if !speech.text.is_empty() {
                    speech.text.push('\n');
                }
                speech.text.push_str(&line);
            }
        }
    }
    if speeches.is_empty() {
        return Err(Error::NoSpeeches);
    }
    Ok(PlayScript { speeches, markers })
}

/// One-hot speaker sequence of the script, with its markers.
pub fn play_to_sequence(script: &PlayScript) -> Result<(WeightedSequence, Vec<Marker>)> {
    let speakers = script.speakers();
    let alphabet = build_alphabet(&speakers)?;
    Ok((one_hot(&speakers, &alphabet)?, script.markers.clone()))
}

/// Markers sidecar: `kind<TAB>label<TAB>position`, one per line.
pub fn write_markers(markers: &[Marker]) -> String {
    let mut out = String::new();
    for m in markers {
        writeln!(out, "{}\t{}\t{}", m.kind, m.label, m.position).unwrap();
    }
    out
}

pub fn parse_markers(text: &str) -> Result<Vec<Marker>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [kind, label, position] = fields[..] else {
            return Err(Error::format(i + 1, "expected kind, label and position"));
        };
        out.push(Marker {
            kind: kind.parse().map_err(|e: String| Error::format(i + 1, e))?,
            label: label.to_owned(),
            position: position
                .parse()
                .map_err(|e| Error::format(i + 1, format!("bad position: {e}")))?,
        });
    }
    Ok(out)
}
