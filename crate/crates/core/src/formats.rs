//! Plain-text sequence formats.
//!
//! * `tokens`: one symbol per line; blank lines and `#` comments ignored.
//! * `counts`: tab-separated; a header row of symbol labels, then one row of
//!   integer counts per position.

use std::fmt::Write as _;

use crate::alphabet::{build_alphabet, Alphabet};
use crate::error::{Error, Result};
use crate::sequence::{one_hot, CountVector, WeightedSequence};

pub fn parse_tokens(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

pub fn read_tokens(text: &str) -> Result<WeightedSequence> {
    let tokens = parse_tokens(text);
    let alphabet = build_alphabet(&tokens)?;
    one_hot(&tokens, &alphabet)
}

pub fn write_tokens<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut out = String::new();
    for t in tokens {
        out.push_str(t.as_ref());
        out.push('\n');
    }
    out
}

pub fn read_counts(text: &str) -> Result<WeightedSequence> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::EmptySequence)?;
    let alphabet = Alphabet::new(header.split('\t').map(str::trim))
        .map_err(|e| Error::format(1, e.to_string()))?;
    let k = alphabet.len();
    let mut rows = Vec::new();
    for (line, row) in lines {
        let counts = row
            .split('\t')
            .map(|c| c.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::format(line, format!("bad count: {e}")))?;
        if counts.len() != k {
            return Err(Error::format(line, format!("{} columns, expected {k}", counts.len())));
        }
        rows.push(CountVector::new(counts));
    }
    WeightedSequence::from_counts(alphabet, &rows)
}

pub fn write_counts(seq: &WeightedSequence) -> String {
    let mut out = seq.alphabet().labels().join("\t");
    out.push('\n');
    for i in 0..seq.len() {
        let row = seq.position(i);
        let mut first = true;
        for c in row.counts() {
            if !first {
                out.push('\t');
            }
            first = false;
            write!(out, "{c}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// `label<TAB>count` for every symbol, in alphabet order.
pub fn write_tally(alphabet: &Alphabet, totals: &CountVector) -> String {
    let mut out = String::new();
    for (label, count) in alphabet.labels().iter().zip(totals.counts()) {
        writeln!(out, "{label}\t{count}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tokens_skip_comments_and_blanks() {
        let seq = read_tokens("# header\nA\n\n  B \r\nA\n").unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(seq.alphabet().labels(), ["A", "B"]);
    }

    #[test]
    fn tokens_with_inner_spaces() {
        let seq = read_tokens("FIRST SENATOR\nDUKE\n").unwrap();
        assert_eq!(seq.alphabet().label(0), "FIRST SENATOR");
    }

    #[test]
    fn empty_tokens_is_error() {
        assert_eq!(read_tokens("# nothing\n").unwrap_err(), Error::EmptySequence);
    }

    #[test]
    fn counts_parse_and_errors() {
        let seq = read_counts("C\tD\n1\t0\n0\t2\n").unwrap();
        assert_eq!(seq.position(1).counts(), [0, 2]);
        assert!(matches!(read_counts("C\tD\n1\n"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(read_counts("C\tD\n1\tx\n"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(read_counts("C\tC\n1\t1\n"), Err(Error::Format { line: 1, .. })));
        assert_eq!(read_counts("C\tD\n0\t0\n").unwrap_err(), Error::ZeroMass);
        assert_eq!(read_counts("").unwrap_err(), Error::EmptySequence);
    }

    #[test]
    fn tally_table() {
        let seq = read_tokens("x\ny\nx\n").unwrap();
        let t = seq.tally(seq.full_span()).unwrap();
        assert_eq!(write_tally(seq.alphabet(), &t), "x\t2\ny\t1\n");
    }

    proptest! {
        #[test]
        fn counts_round_trip(rows in prop::collection::vec(prop::collection::vec(0u64..20, 4), 1..30)) {
            let alphabet = Alphabet::new(["a", "b", "c", "d"]).unwrap();
            let rows: Vec<CountVector> = rows.into_iter().map(CountVector::new).collect();
            if let Ok(seq) = WeightedSequence::from_counts(alphabet, &rows) {
                let text = write_counts(&seq);
                let back = read_counts(&text).unwrap();
                prop_assert_eq!(&back, &seq);
                prop_assert_eq!(write_counts(&back), text);
            }
        }
    }
}
