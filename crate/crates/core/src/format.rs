//! Text records for trades.
//!
//! ```text
//! trade n=6 kind=ext vol=4
//! 000000
//! ...
//! ---
//! 111111
//! ...
//! ```
//!
//! A record with more than one `---` separator is a k-way trade. Blank
//! lines and lines starting with `#` are ignored between records.

use std::fmt::Write as _;

use crate::error::{Result, TradeError};
use crate::trade::{KWayTrade, Trade, TradeKind};
use crate::word::Word;

pub const SEPARATOR: &str = "---";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Record {
    Pair(Trade),
    KWay(KWayTrade),
}

impl Record {
    /// The pair formed by the first two parts.
    pub fn into_trade(self) -> Result<Trade> {
        match self {
            Record::Pair(t) => Ok(t),
            Record::KWay(k) => k.pair(0, 1),
        }
    }
}

fn header(n: usize, kind: TradeKind, vol: usize) -> String {
    format!("trade n={n} kind={kind} vol={vol}\n")
}

fn write_parts<'a>(out: &mut String, parts: impl Iterator<Item = &'a [Word]>) {
    for (i, part) in parts.enumerate() {
        if i > 0 {
            out.push_str(SEPARATOR);
            out.push('\n');
        }
        for w in part {
            let _ = writeln!(out, "{w}");
        }
    }
}

pub fn write_trade(t: &Trade) -> String {
    let mut out = header(t.n(), t.kind(), t.volume());
    write_parts(&mut out, [t.t0(), t.t1()].into_iter());
    out
}

pub fn write_kway(t: &KWayTrade) -> String {
    let mut out = header(t.n(), t.kind(), t.volume());
    write_parts(&mut out, t.parts().iter().map(|p| p.as_slice()));
    out
}

pub fn write_trades<'a>(trades: impl IntoIterator<Item = &'a Trade>) -> String {
    trades.into_iter().map(write_trade).collect()
}

/// Parsed `key=value` fields of a header line such as `trade n=6 kind=ext vol=4`.
pub(crate) fn header_fields(line: &str, lineno: usize, tag: &str) -> Result<Vec<(String, String)>> {
    let mut it = line.split_whitespace();
    if it.next() != Some(tag) {
        return Err(TradeError::Parse { line: lineno, msg: format!("expected `{tag}` header, found {line:?}") });
    }
    it.map(|kv| {
        kv.split_once('=')
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .ok_or_else(|| TradeError::Parse { line: lineno, msg: format!("malformed field {kv:?}") })
    })
    .collect()
}

pub(crate) fn field<'a>(fields: &'a [(String, String)], key: &str, lineno: usize) -> Result<&'a str> {
    fields
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| TradeError::Parse { line: lineno, msg: format!("missing field {key}") })
}

pub(crate) fn parse_usize(v: &str, lineno: usize) -> Result<usize> {
    v.parse().map_err(|_| TradeError::Parse { line: lineno, msg: format!("not a number: {v:?}") })
}

/// Line cursor that skips blanks and comments and tracks 1-based numbers.
pub(crate) struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    pub fn new(s: &'a str) -> Self {
        let lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Lines { lines, pos: 0 }
    }

    pub fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    pub fn next_line(&mut self) -> Option<(usize, &'a str)> {
        let l = self.peek();
        self.pos += 1;
        l
    }

    pub fn words(&mut self, count: usize, n: usize, at: usize) -> Result<Vec<Word>> {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let (no, l) = self
                .next_line()
                .ok_or_else(|| TradeError::Parse { line: at, msg: "record ends early".into() })?;
            let w = Word::parse(l).map_err(|_| TradeError::Parse { line: no, msg: format!("bad word {l:?}") })?;
            if w.len() != n {
                return Err(TradeError::Parse { line: no, msg: format!("word {l} has length {}, expected {n}", w.len()) });
            }
            out.push(w);
        }
        Ok(out)
    }
}

/// Reads the parts of a record whose header was already consumed.
pub(crate) fn read_parts(lines: &mut Lines<'_>, n: usize, vol: usize, at: usize) -> Result<Vec<Vec<Word>>> {
    let mut parts = vec![lines.words(vol, n, at)?];
    while let Some((_, SEPARATOR)) = lines.peek() {
        lines.next_line();
        parts.push(lines.words(vol, n, at)?);
    }
    Ok(parts)
}

/// A record as written, before any trade condition is checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawRecord {
    pub n: usize,
    pub kind: TradeKind,
    pub parts: Vec<Vec<Word>>,
}

impl RawRecord {
    pub fn into_record(self) -> Result<Record> {
        let RawRecord { kind, mut parts, .. } = self;
        if parts.len() == 2 {
            let t1 = parts.pop().unwrap();
            let t0 = parts.pop().unwrap();
            Ok(Record::Pair(Trade::new(kind, t0, t1)?))
        } else {
            Ok(Record::KWay(KWayTrade::new(kind, parts)?))
        }
    }
}

fn parse_raw(lines: &mut Lines<'_>) -> Result<RawRecord> {
    let (no, head) = lines.next_line().expect("caller checked");
    let fields = header_fields(head, no, "trade")?;
    let n = parse_usize(field(&fields, "n", no)?, no)?;
    let kind: TradeKind = field(&fields, "kind", no)?
        .parse()
        .map_err(|_| TradeError::Parse { line: no, msg: "bad kind".into() })?;
    let vol = parse_usize(field(&fields, "vol", no)?, no)?;
    let parts = read_parts(lines, n, vol, no)?;
    if parts.len() == 1 {
        return Err(TradeError::Parse { line: no, msg: "record has a single part".into() });
    }
    Ok(RawRecord { n, kind, parts })
}

/// Parses the records without building trades, so that structurally broken
/// ones can still be reported on.
pub fn parse_raw_records(s: &str) -> Result<Vec<RawRecord>> {
    let mut lines = Lines::new(s);
    let mut out = Vec::new();
    while lines.peek().is_some() {
        out.push(parse_raw(&mut lines)?);
    }
    Ok(out)
}

pub fn parse_records(s: &str) -> Result<Vec<Record>> {
    parse_raw_records(s)?.into_iter().map(RawRecord::into_record).collect()
}

/// Parses every record as a 2-way trade; k-way records are rejected.
pub fn parse_trades(s: &str) -> Result<Vec<Trade>> {
    parse_records(s)?
        .into_iter()
        .map(|r| match r {
            Record::Pair(t) => Ok(t),
            Record::KWay(k) => Err(TradeError::Parse { line: 0, msg: format!("unexpected {}-way record", k.k()) }),
        })
        .collect()
}

pub fn parse_trade(s: &str) -> Result<Trade> {
    let mut v = parse_trades(s)?;
    if v.len() != 1 {
        return Err(TradeError::Parse { line: 0, msg: format!("expected one record, found {}", v.len()) });
    }
    Ok(v.pop().unwrap())
}

/// A plain word set: `words n=<n> count=<c>` followed by one word per line.
pub fn write_word_set(n: usize, words: &[Word]) -> String {
    let mut out = format!("words n={n} count={}\n", words.len());
    for w in words {
        let _ = writeln!(out, "{w}");
    }
    out
}

pub fn parse_word_set(s: &str) -> Result<Vec<Word>> {
    let mut lines = Lines::new(s);
    let (no, head) = lines.next_line().ok_or(TradeError::Parse { line: 1, msg: "empty word set".into() })?;
    let f = header_fields(head, no, "words")?;
    let n = parse_usize(field(&f, "n", no)?, no)?;
    let count = parse_usize(field(&f, "count", no)?, no)?;
    let words = lines.words(count, n, no)?;
    if let Some((extra, _)) = lines.peek() {
        return Err(TradeError::Parse { line: extra, msg: "trailing lines after the word set".into() });
    }
    Ok(words)
}

#[cfg(test)]
mod tests {
    use super::*;

    // parts are listed in ascending mask order (coordinate 0 is the low bit)
    const SIX: &str = "trade n=6 kind=ext vol=4\n000000\n111100\n110011\n001111\n---\n110000\n001100\n000011\n111111\n";

    #[test]
    fn round_trip_is_exact() {
        let t = parse_trade(SIX).unwrap();
        assert_eq!(write_trade(&t), SIX);
    }

    #[test]
    fn kway_round_trip() {
        let text = "trade n=4 kind=steiner:2 vol=1\n1100\n---\n0011\n---\n1010\n";
        let recs = parse_records(text).unwrap();
        match &recs[0] {
            Record::KWay(k) => {
                assert_eq!(k.k(), 3);
                assert_eq!(write_kway(k), text);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn comments_and_errors() {
        let text = format!("# header\n\n{SIX}\n{SIX}");
        assert_eq!(parse_trades(&text).unwrap().len(), 2);
        let bad = SIX.replace("001100", "00110");
        assert!(matches!(parse_trades(&bad), Err(TradeError::Parse { line: 8, .. })));
        assert!(parse_trades("trade n=6 kind=ext vol=9\n000000\n").is_err());
    }

    #[test]
    fn word_set_round_trip() {
        let words = vec![Word::parse("0011").unwrap(), Word::parse("1100").unwrap()];
        let text = write_word_set(4, &words);
        assert_eq!(text, "words n=4 count=2\n0011\n1100\n");
        assert_eq!(parse_word_set(&text).unwrap(), words);
        assert!(parse_word_set("words n=4 count=3\n0011\n").is_err());
    }
}
