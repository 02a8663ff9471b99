//! Published trades and their tabulated properties, shipped as text files
//! under `data/v1` and compiled into the library.
//!
//! Fixture ids:
//! * `L6`: the length-6 trade; `L8-16a`, `L8-16b`: the two volume-16
//!   trades of length 8 (dual spaces of 4 and 2 words);
//! * `C0`, `C1`, `C2`: three extended 1-perfect codes of length 8;
//! * `T16` … `T40`: the eight trades of length 10;
//! * `32` … `132`: the 25 constant-weight trades of length 12;
//! * `STS1` … `STS16`, `STS10-T32c`, …: Steiner triple system trades
//!   derived from the length-10 trades, with their occurrence counts.

use std::collections::{BTreeMap, BTreeSet};

use crate::analysis::orbit;
use crate::constructions::GeneratorMatrix;
use crate::error::{Result, TradeError};
use crate::format::parse_trades;
use crate::gf2;
use crate::trade::{KWayTrade, Trade, TradeKind};
use crate::word::{CoordPermutation, Word};

pub const DATA_VERSION: &str = "v1";

const LENGTH8: &str = include_str!("../data/v1/length8.txt");
const LENGTH10: &str = include_str!("../data/v1/length10.txt");
const LENGTH12: &str = include_str!("../data/v1/length12.txt");
const TABLE2: &str = include_str!("../data/v1/table2.txt");
const CODES: [(&str, &str); 3] = [
    ("C0", include_str!("../data/v1/c0.txt")),
    ("C1", include_str!("../data/v1/c1.txt")),
    ("C2", include_str!("../data/v1/c2.txt")),
];

pub const LENGTH8_IDS: [&str; 2] = ["L8-16a", "L8-16b"];
pub const CODE_IDS: [&str; 3] = ["C0", "C1", "C2"];
pub const LENGTH10_IDS: [&str; 8] = ["T16", "T24", "T28", "T32a", "T32b", "T32c", "T36", "T40"];
pub const LENGTH12_IDS: [&str; 25] = [
    "32", "48", "56a", "56b", "68", "72a", "72b", "72c", "72d", "80a", "80b", "86", "92a", "92b", "96a", "96b", "98",
    "102", "108a", "108b", "110a", "110b", "120a", "120b", "132",
];
pub const STS_IDS: [&str; 15] = [
    "STS1", "STS2", "STS4", "STS5", "STS7", "STS11", "STS12", "STS13", "STS14", "STS15", "STS16", "STS10-T32c",
    "STS10-T40", "STS12-T40", "STS12-T36",
];

/// Every known fixture id.
pub fn all_ids() -> Vec<&'static str> {
    let mut v = vec!["L6"];
    v.extend(LENGTH8_IDS);
    v.extend(CODE_IDS);
    v.extend(LENGTH10_IDS);
    v.extend(LENGTH12_IDS);
    v.extend(STS_IDS);
    v
}

#[derive(Clone, Debug)]
pub enum Payload {
    Trade(Trade),
    Code { generators: GeneratorMatrix, words: Vec<Word> },
}

/// A generator of a tabulated symmetry group. Grayed generators are
/// redundant for producing the orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub perm: CoordPermutation,
    pub grayed: bool,
}

/// Tabulated properties; `None` or empty means not tabulated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expected {
    pub volume: Option<usize>,
    /// Factorisation of `|Aut(T0 ∪ T1)|` as printed: `[2, orbit, stabiliser]`
    /// for length 10, `[translations, stabiliser of 0]` for length 12.
    pub aut_factors: Vec<u64>,
    /// Affine rank of `T0` and the increase from `T1`.
    pub rank: Option<(usize, usize)>,
    /// Words spanning the dual space together with the all-one word.
    pub dual_span: Vec<Word>,
    pub dual_size: Option<usize>,
    /// Kernel basis of `T0`.
    pub kernel: Vec<Word>,
    pub coordinate_orbits: Option<Vec<Vec<usize>>>,
    pub constant_weight: Option<bool>,
    pub witt: Option<bool>,
    pub no_squares: Option<bool>,
    pub third_mate: Option<bool>,
    pub structure: Option<String>,
    /// Occurrences of a derived Steiner trade in each length-10 trade.
    pub derived_counts: BTreeMap<String, u64>,
}

impl Expected {
    pub fn aut_order(&self) -> Option<u64> {
        (!self.aut_factors.is_empty()).then(|| self.aut_factors.iter().product())
    }

    /// The dual space spanned by [`Expected::dual_span`] and `1^n`.
    pub fn dual_members(&self, n: usize) -> Option<Vec<Word>> {
        if self.dual_span.is_empty() {
            return None;
        }
        let mut bits: Vec<u32> = self.dual_span.iter().map(|w| w.bits()).collect();
        bits.push(crate::word::full_mask(n));
        Some(gf2::span(&bits).into_iter().map(|b| Word::from_raw(b, n)).collect())
    }
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub id: String,
    pub payload: Payload,
    /// Third part extending the trade to a 3-way trade.
    pub third: Option<Vec<Word>>,
    pub group: Vec<Generator>,
    pub expected: Expected,
}

impl Fixture {
    pub fn trade(&self) -> Option<&Trade> {
        match &self.payload {
            Payload::Trade(t) => Some(t),
            Payload::Code { .. } => None,
        }
    }

    pub fn three_way(&self) -> Option<KWayTrade> {
        let t = self.trade()?;
        let t2 = self.third.clone()?;
        KWayTrade::new(t.kind(), vec![t.t0().to_vec(), t.t1().to_vec(), t2]).ok()
    }
}

fn bad(id: &str, msg: impl Into<String>) -> TradeError {
    TradeError::Parse { line: 0, msg: format!("fixture {id}: {}", msg.into()) }
}

/// `key rest` lines grouped into blocks closed by `end`.
fn blocks(text: &str) -> Result<Vec<Vec<(usize, &str, &str)>>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "end" {
            out.push(std::mem::take(&mut cur));
            continue;
        }
        let (k, v) = line.split_once(' ').unwrap_or((line, ""));
        cur.push((i + 1, k, v.trim()));
    }
    if !cur.is_empty() {
        return Err(TradeError::Parse { line: cur[0].0, msg: "block without `end`".into() });
    }
    Ok(out)
}

fn words(s: &str, line: usize) -> Result<Vec<Word>> {
    s.split_whitespace()
        .map(|t| Word::parse(t).map_err(|_| TradeError::Parse { line, msg: format!("bad word {t:?}") }))
        .collect()
}

fn number<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| TradeError::Parse { line, msg: format!("not a number: {s:?}") })
}

fn coord_groups(s: &str, line: usize) -> Result<Vec<Vec<usize>>> {
    s.split_whitespace()
        .map(|g| {
            g.chars()
                .map(|c| c.to_digit(16).map(|d| d as usize).ok_or(TradeError::Parse { line, msg: format!("bad coordinate {c}") }))
                .collect()
        })
        .collect()
}

fn rank_pair(s: &str, line: usize) -> Result<(usize, usize)> {
    let (a, b) = s.split_once('+').ok_or(TradeError::Parse { line, msg: format!("bad rank {s:?}") })?;
    Ok((number(a, line)?, number(b, line)?))
}

fn volume_of(id: &str) -> Option<usize> {
    id.trim_start_matches('T').trim_end_matches(|c: char| c.is_ascii_alphabetic()).parse().ok()
}

fn ext(t0: Vec<Word>, t1: Vec<Word>) -> Result<Trade> {
    Trade::new(TradeKind::Extended1Perfect, t0, t1)
}

fn require_valid(id: &str, t: &Trade) -> Result<()> {
    let r = t.verify();
    if !r.valid {
        let why = r.violations.first().map(|v| v.to_string()).unwrap_or_default();
        return Err(bad(id, format!("not a valid trade: {why}")));
    }
    Ok(())
}

fn complement_all(v: &[Word]) -> Vec<Word> {
    v.iter().map(|w| w.complement()).collect()
}

fn load_small(id: &str) -> Result<Fixture> {
    let (trade, dual_size) = match id {
        "L6" => {
            let t0 = words("000000 111100 110011 001111", 0)?;
            (ext(t0.clone(), complement_all(&t0))?, None)
        }
        "L8-16a" | "L8-16b" => {
            let mut ts = parse_trades(LENGTH8)?;
            let (t, d) = if id == "L8-16a" { (ts.swap_remove(0), 4) } else { (ts.swap_remove(1), 2) };
            (t, Some(d))
        }
        _ => unreachable!(),
    };
    require_valid(id, &trade)?;
    let expected = Expected { volume: Some(trade.volume()), dual_size, ..Default::default() };
    Ok(Fixture { id: id.to_string(), payload: Payload::Trade(trade), third: None, group: Vec::new(), expected })
}

fn load_code(id: &str) -> Result<Fixture> {
    let text = CODES.iter().find(|(k, _)| *k == id).map(|(_, t)| *t).expect("known code id");
    let generators = GeneratorMatrix::parse(text)?;
    let words = generators.span();
    Ok(Fixture {
        id: id.to_string(),
        payload: Payload::Code { generators, words },
        third: None,
        group: Vec::new(),
        expected: Expected::default(),
    })
}

fn load_length10(id: &str) -> Result<Fixture> {
    for block in blocks(LENGTH10)? {
        if block.first().map(|b| b.2) != Some(id) {
            continue;
        }
        let mut kernel = Vec::new();
        let mut reps = Vec::new();
        let mut ex = Expected::default();
        for &(line, key, val) in &block[1..] {
            match key {
                "kernel" => kernel = words(val, line)?,
                "rep" => reps.extend(words(val, line)?),
                "rank" => ex.rank = Some(rank_pair(val, line)?),
                "aut" => ex.aut_factors = val.split_whitespace().map(|x| number(x, line)).collect::<Result<_>>()?,
                "orbits" => ex.coordinate_orbits = Some(coord_groups(val, line)?),
                "cw" => ex.constant_weight = Some(val == "yes"),
                _ => return Err(TradeError::Parse { line, msg: format!("unknown key {key}") }),
            }
        }
        let kbits: Vec<u32> = kernel.iter().map(|w| w.bits()).collect();
        let mut t0 = BTreeSet::new();
        for r in &reps {
            for k in gf2::span(&kbits) {
                t0.insert(Word::from_raw(r.bits() ^ k, r.len()));
            }
        }
        let t0: Vec<Word> = t0.into_iter().collect();
        let trade = ext(t0.clone(), complement_all(&t0))?;
        require_valid(id, &trade)?;
        if Some(trade.volume()) != volume_of(id) {
            return Err(bad(id, format!("volume {} does not match the name", trade.volume())));
        }
        ex.volume = Some(trade.volume());
        ex.kernel = kernel;
        return Ok(Fixture { id: id.to_string(), payload: Payload::Trade(trade), third: None, group: Vec::new(), expected: ex });
    }
    Err(TradeError::UnknownFixture(id.to_string()))
}

fn load_sts(id: &str) -> Result<Fixture> {
    let name = id.strip_prefix("STS").ok_or_else(|| TradeError::UnknownFixture(id.to_string()))?;
    for block in blocks(TABLE2)? {
        if block.first().map(|b| b.2) != Some(name) {
            continue;
        }
        let mut parts = [Vec::new(), Vec::new()];
        let mut ex = Expected::default();
        for &(line, key, val) in &block[1..] {
            match key {
                "t0" | "t1" => {
                    let p = (key == "t1") as usize;
                    for b in coord_groups(val.replace(',', " ").as_str(), line)? {
                        parts[p].push(Word::from_support(&b, 10)?);
                    }
                }
                "count" => {
                    for kv in val.split_whitespace() {
                        let (k, v) = kv.split_once('=').ok_or(TradeError::Parse { line, msg: format!("bad count {kv}") })?;
                        ex.derived_counts.insert(k.to_string(), number(v, line)?);
                    }
                }
                _ => return Err(TradeError::Parse { line, msg: format!("unknown key {key}") }),
            }
        }
        let [a, b] = parts;
        let trade = Trade::new(TradeKind::Steiner(3), a, b)?;
        require_valid(id, &trade)?;
        ex.volume = Some(trade.volume());
        return Ok(Fixture { id: id.to_string(), payload: Payload::Trade(trade), third: None, group: Vec::new(), expected: ex });
    }
    Err(TradeError::UnknownFixture(id.to_string()))
}

/// Orbit of a representative under `gens`; `size` is `k`, `k*2` (add the
/// complementary orbit) or `-`.
fn orbit_spec(id: &str, rep: Word, size: &str, gens: &[CoordPermutation], line: usize) -> Result<Vec<Word>> {
    let (k, doubled) = match size.strip_suffix("*2") {
        Some(k) => (k, true),
        None => (size, false),
    };
    let mut o = orbit(rep, gens);
    if k != "-" {
        let k: usize = number(k, line)?;
        if o.len() != k {
            return Err(bad(id, format!("orbit of {rep} has {} words, table says {k}", o.len())));
        }
    }
    if doubled {
        let c = orbit(rep.complement(), gens);
        if c.binary_search(&rep).is_ok() {
            return Err(bad(id, format!("orbit of {rep} is self-complementary")));
        }
        o.extend(c);
    }
    Ok(o)
}

fn union_orbits(id: &str, orbits: Vec<Vec<Word>>) -> Result<Vec<Word>> {
    let total: usize = orbits.iter().map(|o| o.len()).sum();
    let set: BTreeSet<Word> = orbits.into_iter().flatten().collect();
    if set.len() != total {
        return Err(bad(id, "orbits overlap"));
    }
    Ok(set.into_iter().collect())
}

fn load_length12(id: &str) -> Result<Fixture> {
    for block in blocks(LENGTH12)? {
        if block.first().map(|b| b.2) != Some(id) {
            continue;
        }
        let mut group = Vec::new();
        for &(line, key, val) in &block[1..] {
            if key == "gen" || key == "gen*" {
                let perm = CoordPermutation::parse_cycles(val, 12)
                    .map_err(|_| TradeError::Parse { line, msg: format!("bad permutation {val}") })?;
                group.push(Generator { perm, grayed: key == "gen*" });
            }
        }
        let gens: Vec<CoordPermutation> = group.iter().filter(|g| !g.grayed).map(|g| g.perm).collect();
        let mut orbits: [Vec<Vec<Word>>; 3] = Default::default();
        let mut perm_of = [None, None, None];
        let mut translate = None;
        let mut ex = Expected { witt: Some(false), no_squares: Some(false), ..Default::default() };
        for &(line, key, val) in &block[1..] {
            match key {
                "gen" | "gen*" => {}
                "t0" | "t1" | "t2" => {
                    let p = key[1..].parse::<usize>().expect("t0..t2");
                    let (w, size) = val.split_once(' ').ok_or(TradeError::Parse { line, msg: "missing orbit size".into() })?;
                    let rep = Word::parse(w).map_err(|_| TradeError::Parse { line, msg: format!("bad word {w:?}") })?;
                    orbits[p].push(orbit_spec(id, rep, size.trim(), &gens, line)?);
                }
                "t1-perm" | "t2-perm" => {
                    let p = if key == "t1-perm" { 1 } else { 2 };
                    perm_of[p] = Some(
                        CoordPermutation::parse_cycles(val, 12)
                            .map_err(|_| TradeError::Parse { line, msg: format!("bad permutation {val}") })?,
                    );
                }
                "t1-translate" => translate = Some(words(val, line)?[0]),
                "aut" => ex.aut_factors = val.split_whitespace().map(|x| number(x, line)).collect::<Result<_>>()?,
                "dual" => ex.dual_span = words(val, line)?,
                "structure" => ex.structure = Some(val.to_string()),
                "witt" => ex.witt = Some(true),
                "no-squares" => ex.no_squares = Some(true),
                _ => return Err(TradeError::Parse { line, msg: format!("unknown key {key}") }),
            }
        }
        let [o0, o1, o2] = orbits;
        let t0 = union_orbits(id, o0)?;
        let image = |g: &CoordPermutation, v: &[Word]| -> Vec<Word> { v.iter().map(|&w| g.apply(w)).collect() };
        let t1 = if !o1.is_empty() {
            union_orbits(id, o1)?
        } else if let Some(g) = &perm_of[1] {
            image(g, &t0)
        } else if let Some(x) = translate {
            t0.iter().map(|w| Word::from_raw(w.bits() ^ x.bits(), 12)).collect()
        } else {
            return Err(bad(id, "no description of T1"));
        };
        let trade = ext(t0.clone(), t1)?;
        require_valid(id, &trade)?;
        if let Some(x) = translate {
            let moved: BTreeSet<Word> = t0.iter().map(|w| Word::from_raw(w.bits() ^ x.bits(), 12)).collect();
            if moved.into_iter().collect::<Vec<_>>() != trade.t1() {
                return Err(bad(id, format!("T1 is not T0 + {x}")));
            }
        }
        if Some(trade.volume()) != volume_of(id) {
            return Err(bad(id, format!("volume {} does not match the name", trade.volume())));
        }
        // T2 is the image of T0, or failing that of T1
        let third = if !o2.is_empty() {
            Some(union_orbits(id, o2)?)
        } else if let Some(g) = &perm_of[2] {
            [trade.t0(), trade.t1()].into_iter().map(|p| image(g, p)).find(|t2| {
                KWayTrade::new(TradeKind::Extended1Perfect, vec![trade.t0().to_vec(), trade.t1().to_vec(), t2.clone()])
                    .is_ok_and(|k| k.is_valid())
            })
        } else {
            None
        };
        if let Some(t2) = &third {
            let k = KWayTrade::new(TradeKind::Extended1Perfect, vec![trade.t0().to_vec(), trade.t1().to_vec(), t2.clone()])?;
            if !k.is_valid() {
                return Err(bad(id, "third part does not form a 3-way trade"));
            }
        } else if perm_of[2].is_some() {
            return Err(bad(id, "third part does not form a 3-way trade"));
        }
        ex.volume = Some(trade.volume());
        ex.constant_weight = Some(true);
        ex.third_mate = Some(third.is_some());
        return Ok(Fixture { id: id.to_string(), payload: Payload::Trade(trade), third, group, expected: ex });
    }
    Err(TradeError::UnknownFixture(id.to_string()))
}

/// Loads and checks a fixture: every trade is verified, orbit sizes are
/// compared with the tabulated ones, and volumes with the names.
pub fn load_fixture(id: &str) -> Result<Fixture> {
    if id == "L6" || LENGTH8_IDS.contains(&id) {
        load_small(id)
    } else if CODE_IDS.contains(&id) {
        load_code(id)
    } else if LENGTH10_IDS.contains(&id) {
        load_length10(id)
    } else if LENGTH12_IDS.contains(&id) {
        load_length12(id)
    } else if STS_IDS.contains(&id) {
        load_sts(id)
    } else {
        Err(TradeError::UnknownFixture(id.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_loads() {
        let failures: Vec<String> =
            all_ids().into_iter().filter_map(|id| load_fixture(id).err().map(|e| format!("{id}: {e}"))).collect();
        assert!(failures.is_empty(), "{failures:#?}");
    }

    #[test]
    fn unknown_id() {
        assert_eq!(load_fixture("T99").unwrap_err(), TradeError::UnknownFixture("T99".into()));
    }

    #[test]
    fn named_examples() {
        assert_eq!(load_fixture("T16").unwrap().trade().unwrap().volume(), 16);
        assert_eq!(load_fixture("132").unwrap().trade().unwrap().t0().len(), 132);
        let f = load_fixture("80a").unwrap();
        let t = f.trade().unwrap();
        let x = Word::parse("000000111111").unwrap();
        assert!(t.t0().iter().all(|w| t.t1().contains(&Word::from_raw(w.bits() ^ x.bits(), 12))));
    }
}
