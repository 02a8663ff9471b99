//! Checkpoint files: the merged partial states after a checkpoint.
//!
//! ```text
//! checkpoint n=12 cw=1 depths=3,6 stage=1 states=2 solutions=0 nodes=41 merged=30>2
//! state n=12 v0=2 v1=12
//! <T0 words>
//! ---
//! <T1 words>
//! frontier0:
//! frontier1: 000001111110 ...
//! mult: 6
//! ```
//!
//! The states are followed by the solutions already completed before the
//! checkpoint, in the same layout with empty frontiers. `merged` lists the
//! state counts before and after each applied checkpoint.

use std::fmt::Write as _;

use crate::error::{Result, TradeError};
use crate::format::{field, header_fields, parse_usize, read_parts, Lines};
use crate::word::Word;

use super::{CheckpointStat, PartialState};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub n: usize,
    pub constant_weight: bool,
    pub depths: Vec<usize>,
    /// Number of checkpoints already applied.
    pub stage: usize,
    pub states: Vec<PartialState>,
    /// Solutions completed before the last checkpoint.
    pub solutions: Vec<PartialState>,
    /// Search nodes visited so far.
    pub nodes: u64,
    pub stats: Vec<CheckpointStat>,
}

fn word_line(tag: &str, words: &[u32], n: usize) -> String {
    let mut s = format!("{tag}:");
    for &w in words {
        let _ = write!(s, " {}", Word::from_raw(w, n));
    }
    s.push('\n');
    s
}

pub fn write_state(s: &PartialState) -> String {
    let n = s.n;
    let mut out = format!("state n={n} v0={} v1={}\n", s.t0.len(), s.t1.len());
    for &w in &s.t0 {
        let _ = writeln!(out, "{}", Word::from_raw(w, n));
    }
    out.push_str("---\n");
    for &w in &s.t1 {
        let _ = writeln!(out, "{}", Word::from_raw(w, n));
    }
    out.push_str(&word_line("frontier0", &s.frontier0, n));
    out.push_str(&word_line("frontier1", &s.frontier1, n));
    let _ = writeln!(out, "mult: {}", s.multiplicity);
    out
}

pub fn write_checkpoint(cp: &Checkpoint) -> String {
    let depths: Vec<String> = cp.depths.iter().map(|d| d.to_string()).collect();
    let mut out = format!(
        "checkpoint n={} cw={} depths={} stage={} states={} solutions={} nodes={} merged={}\n",
        cp.n,
        cp.constant_weight as u8,
        depths.join(","),
        cp.stage,
        cp.states.len(),
        cp.solutions.len(),
        cp.nodes,
        cp.stats.iter().map(|s| format!("{}>{}", s.before, s.after)).collect::<Vec<_>>().join(",")
    );
    for s in cp.states.iter().chain(&cp.solutions) {
        out.push_str(&write_state(s));
    }
    out
}

fn tagged<'a>(lines: &mut Lines<'a>, tag: &str, at: usize) -> Result<(usize, &'a str)> {
    let (no, l) = lines.next_line().ok_or_else(|| TradeError::Parse { line: at, msg: format!("missing {tag} line") })?;
    let rest = l
        .strip_prefix(tag)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| TradeError::Parse { line: no, msg: format!("expected `{tag}:`") })?;
    Ok((no, rest.trim()))
}

fn parse_word_list(s: &str, n: usize, no: usize) -> Result<Vec<u32>> {
    s.split_whitespace()
        .map(|t| match Word::parse(t) {
            Ok(w) if w.len() == n => Ok(w.bits()),
            _ => Err(TradeError::Parse { line: no, msg: format!("bad word {t:?}") }),
        })
        .collect()
}

fn parse_state(lines: &mut Lines<'_>) -> Result<PartialState> {
    let (no, head) = lines.next_line().ok_or_else(|| TradeError::Parse { line: 0, msg: "missing state".into() })?;
    let f = header_fields(head, no, "state")?;
    let n = parse_usize(field(&f, "n", no)?, no)?;
    let v0 = parse_usize(field(&f, "v0", no)?, no)?;
    let v1 = parse_usize(field(&f, "v1", no)?, no)?;
    let t0 = lines.words(v0, n, no)?;
    match lines.next_line() {
        Some((_, "---")) => {}
        other => {
            return Err(TradeError::Parse { line: other.map_or(no, |o| o.0), msg: "expected `---`".into() });
        }
    }
    let t1 = read_parts(lines, n, v1, no)?;
    if t1.len() != 1 {
        return Err(TradeError::Parse { line: no, msg: "a state has exactly two parts".into() });
    }
    let (l0, f0) = tagged(lines, "frontier0", no)?;
    let (l1, f1) = tagged(lines, "frontier1", no)?;
    let (lm, m) = tagged(lines, "mult", no)?;
    let bits = |v: &[Word]| v.iter().map(|w| w.bits()).collect::<Vec<_>>();
    Ok(PartialState {
        n,
        t0: bits(&t0),
        t1: bits(&t1[0]),
        frontier0: parse_word_list(f0, n, l0)?,
        frontier1: parse_word_list(f1, n, l1)?,
        multiplicity: m.parse().map_err(|_| TradeError::Parse { line: lm, msg: format!("bad multiplicity {m:?}") })?,
    })
}

pub fn read_checkpoint(s: &str) -> Result<Checkpoint> {
    let mut lines = Lines::new(s);
    let (no, head) = lines.next_line().ok_or_else(|| TradeError::Parse { line: 1, msg: "empty checkpoint".into() })?;
    let f = header_fields(head, no, "checkpoint")?;
    let n = parse_usize(field(&f, "n", no)?, no)?;
    let constant_weight = field(&f, "cw", no)? == "1";
    let depths_s = field(&f, "depths", no)?;
    let depths = if depths_s.is_empty() {
        Vec::new()
    } else {
        depths_s.split(',').map(|d| parse_usize(d, no)).collect::<Result<Vec<_>>>()?
    };
    let stage = parse_usize(field(&f, "stage", no)?, no)?;
    let count = parse_usize(field(&f, "states", no)?, no)?;
    let solved = parse_usize(field(&f, "solutions", no)?, no)?;
    let nodes = field(&f, "nodes", no)?
        .parse()
        .map_err(|_| TradeError::Parse { line: no, msg: "bad node count".into() })?;
    if stage == 0 || stage > depths.len() {
        return Err(TradeError::Parse { line: no, msg: format!("stage {stage} outside 1..={}", depths.len()) });
    }
    let merged = field(&f, "merged", no)?;
    let counts: Vec<(usize, usize)> = merged
        .split(',')
        .filter(|m| !m.is_empty())
        .map(|m| {
            let (b, a) = m.split_once('>').ok_or(TradeError::Parse { line: no, msg: format!("bad merge count {m:?}") })?;
            Ok((parse_usize(b, no)?, parse_usize(a, no)?))
        })
        .collect::<Result<_>>()?;
    if counts.len() != stage {
        return Err(TradeError::Parse { line: no, msg: format!("{} merge counts for stage {stage}", counts.len()) });
    }
    let stats = counts
        .into_iter()
        .zip(&depths)
        .map(|((before, after), &depth)| CheckpointStat { depth, before, after })
        .collect();
    let states = (0..count).map(|_| parse_state(&mut lines)).collect::<Result<Vec<_>>>()?;
    let solutions = (0..solved).map(|_| parse_state(&mut lines)).collect::<Result<Vec<_>>>()?;
    if let Some((no, _)) = lines.next_line() {
        return Err(TradeError::Parse { line: no, msg: "trailing content after the last state".into() });
    }
    Ok(Checkpoint { n, constant_weight, depths, stage, states, solutions, nodes, stats })
}
