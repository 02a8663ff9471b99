//! Building trades from smaller pieces: doubling, concatenation along a
//! latin trade, and differences of linear codes.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Result, TradeError};
use crate::format::{field, header_fields, parse_usize, Lines};
use crate::gf2;
use crate::trade::{KWayTrade, Trade, TradeKind};
use crate::word::Word;

fn require_valid(t: &Trade, what: &str) -> Result<()> {
    let r = t.verify();
    if r.valid {
        Ok(())
    } else {
        let why = r.violations.first().map(|v| v.to_string()).unwrap_or_default();
        Err(TradeError::InvalidTrade(format!("{what}: {why}")))
    }
}

fn append2(w: Word, bits: (bool, bool)) -> Result<Word> {
    w.append(bits.0)?.append(bits.1)
}

/// Lengthens a trade by two coordinates: `(T0·00 ∪ T1·11, T0·11 ∪ T1·00)`.
pub fn double(t: &Trade) -> Result<Trade> {
    require_valid(t, "input")?;
    let grow = |a: &[Word], b: &[Word]| -> Result<Vec<Word>> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        for &w in a {
            out.push(append2(w, (false, false))?);
        }
        for &w in b {
            out.push(append2(w, (true, true))?);
        }
        Ok(out)
    };
    let d = Trade::new(t.kind(), grow(t.t0(), t.t1())?, grow(t.t1(), t.t0())?)?;
    require_valid(&d, "doubled trade")?;
    Ok(d)
}

/// A k-way trade in the q-ary Hamming graph H(m, q) with respect to lines
/// (sets of q words differing in one fixed coordinate).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinKWayTrade {
    m: usize,
    q: usize,
    parts: Vec<Vec<Vec<u8>>>,
    /// Number of symbols used at each coordinate (largest symbol + 1).
    symbol_counts: Vec<usize>,
}

impl LatinKWayTrade {
    pub fn new(m: usize, q: usize, parts: Vec<Vec<Vec<u8>>>) -> Result<Self> {
        if m == 0 || q < 2 || parts.len() < 2 {
            return Err(TradeError::Precondition(format!("latin trade needs m >= 1, q >= 2, k >= 2 (m={m}, q={q})")));
        }
        let mut seen = HashSet::new();
        let mut symbol_counts = vec![0usize; m];
        for part in &parts {
            if part.is_empty() {
                return Err(TradeError::EmptyPart);
            }
            for w in part {
                if w.len() != m || w.iter().any(|&s| s as usize >= q) {
                    return Err(TradeError::Precondition(format!("bad latin word {w:?}")));
                }
                if !seen.insert(w.clone()) {
                    return Err(TradeError::Precondition(format!("latin word {w:?} occurs twice")));
                }
                for (i, &s) in w.iter().enumerate() {
                    symbol_counts[i] = symbol_counts[i].max(s as usize + 1);
                }
            }
        }
        let parts = parts
            .into_iter()
            .map(|mut p| {
                p.sort();
                p
            })
            .collect();
        let t = LatinKWayTrade { m, q, parts, symbol_counts };
        if !t.is_valid() {
            return Err(TradeError::InvalidTrade("some line meets the parts unequally".into()));
        }
        Ok(t)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<Vec<u8>>] {
        &self.parts
    }

    pub fn symbol_counts(&self) -> &[usize] {
        &self.symbol_counts
    }

    fn owner(&self) -> HashMap<&[u8], usize> {
        let mut owner = HashMap::new();
        for (p, part) in self.parts.iter().enumerate() {
            for w in part {
                owner.insert(w.as_slice(), p);
            }
        }
        owner
    }

    /// Every line meets every part equally often, 0 or 1 times.
    fn is_valid(&self) -> bool {
        let owner = self.owner();
        let k = self.k();
        let mut line = vec![0u8; self.m];
        for part in &self.parts {
            for w in part {
                for i in 0..self.m {
                    line.copy_from_slice(w);
                    let mut hits = vec![0usize; k];
                    for s in 0..self.q {
                        line[i] = s as u8;
                        if let Some(&p) = owner.get(line.as_slice()) {
                            hits[p] += 1;
                        }
                    }
                    if hits.iter().any(|&h| h != 1) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The pair `(parts[a], parts[b])` is primary: its words are connected
    /// through shared lines.
    pub fn is_primary_pair(&self, a: usize, b: usize) -> bool {
        let words: Vec<&Vec<u8>> = self.parts[a].iter().chain(&self.parts[b]).collect();
        let mut seen = vec![false; words.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in 0..words.len() {
                if !seen[y] && words[x].iter().zip(words[y]).filter(|(s, t)| s != t).count() == 1 {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// The q-way latin trade whose part `j` holds the words of length `m` with
/// coordinate sum `j` modulo `q`.
pub fn parity_latin_trade(m: usize, q: usize) -> Result<LatinKWayTrade> {
    if m < 2 || q < 2 {
        return Err(TradeError::Precondition(format!("parity latin trade needs m >= 2, q >= 2 (m={m}, q={q})")));
    }
    let total = q.checked_pow(m as u32).filter(|&t| t <= 1 << 20).ok_or_else(|| {
        TradeError::Unsupported(format!("q^m too large (m={m}, q={q})"))
    })?;
    let mut parts = vec![Vec::new(); q];
    for mut x in 0..total {
        let mut w = vec![0u8; m];
        for s in w.iter_mut().rev() {
            *s = (x % q) as u8;
            x /= q;
        }
        let sum: usize = w.iter().map(|&s| s as usize).sum();
        parts[sum % q].push(w);
    }
    LatinKWayTrade::new(m, q, parts)
}

/// Concatenation along every part of `latin`: part `j` of the result holds
/// `c_0 … c_{m-1}` with `c_i` from part `b_i` of `components[i]`, over all
/// `b` in part `j` of `latin`.
pub fn concatenate_kway(latin: &LatinKWayTrade, components: &[KWayTrade]) -> Result<KWayTrade> {
    if components.len() != latin.m() {
        return Err(TradeError::Precondition(format!(
            "{} components for a latin trade of length {}",
            components.len(),
            latin.m()
        )));
    }
    let n: usize = components.iter().map(|c| c.n()).sum();
    if n > crate::word::MAX_LEN {
        return Err(TradeError::InvalidLength(n));
    }
    for (i, c) in components.iter().enumerate() {
        if c.kind() != TradeKind::Extended1Perfect {
            return Err(TradeError::KindMismatch { expected: "ext".into(), found: c.kind().to_string() });
        }
        if latin.symbol_counts()[i] > c.k() {
            return Err(TradeError::Precondition(format!(
                "coordinate {i} uses {} symbols but component {i} has {} parts",
                latin.symbol_counts()[i],
                c.k()
            )));
        }
        if !c.is_valid() {
            return Err(TradeError::InvalidTrade(format!("component {i}")));
        }
    }
    let mut parts = Vec::with_capacity(latin.k());
    for lp in latin.parts() {
        let mut out = Vec::new();
        for b in lp {
            let mut acc: Vec<Word> = components[0].parts()[b[0] as usize].clone();
            for i in 1..latin.m() {
                let next = &components[i].parts()[b[i] as usize];
                let mut grown = Vec::with_capacity(acc.len() * next.len());
                for &x in &acc {
                    for &y in next {
                        grown.push(x.concat(y)?);
                    }
                }
                acc = grown;
            }
            out.extend(acc);
        }
        parts.push(out);
    }
    let t = KWayTrade::new(TradeKind::Extended1Perfect, parts)?;
    if !t.is_valid() {
        return Err(TradeError::InvalidTrade("concatenation is not a trade".into()));
    }
    Ok(t)
}

/// The pair built from the first two parts of `latin`.
pub fn concatenate(latin: &LatinKWayTrade, components: &[KWayTrade]) -> Result<Trade> {
    let pair = LatinKWayTrade::new(latin.m(), latin.q(), latin.parts()[..2].to_vec())?;
    let t = concatenate_kway(&pair, components)?.pair(0, 1)?;
    require_valid(&t, "concatenation")?;
    Ok(t)
}

/// The block-indicator words `0…0 1^{n_i} 0…0` of a concatenation.
pub fn block_indicators(lengths: &[usize]) -> Result<Vec<Word>> {
    let n: usize = lengths.iter().sum();
    let mut start = 0;
    let mut out = Vec::with_capacity(lengths.len());
    for &len in lengths {
        out.push(Word::from_support(&(start..start + len).collect::<Vec<_>>(), n)?);
        start += len;
    }
    Ok(out)
}

/// A spanning set of a binary linear code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    pub n: usize,
    pub rows: Vec<Word>,
}

impl GeneratorMatrix {
    pub fn new(n: usize, rows: Vec<Word>) -> Result<Self> {
        if let Some(w) = rows.iter().find(|w| w.len() != n) {
            return Err(TradeError::LengthMismatch(w.len(), n));
        }
        Ok(GeneratorMatrix { n, rows })
    }

    /// Parses `span n=<n>` followed by one row per line.
    pub fn parse(s: &str) -> Result<Self> {
        let mut lines = Lines::new(s);
        let (no, head) = lines.next_line().ok_or(TradeError::Parse { line: 1, msg: "empty generator file".into() })?;
        let f = header_fields(head, no, "span")?;
        let n = parse_usize(field(&f, "n", no)?, no)?;
        let mut rows = Vec::new();
        while let Some((no, l)) = lines.next_line() {
            let w = Word::parse(l).map_err(|_| TradeError::Parse { line: no, msg: format!("bad word {l:?}") })?;
            if w.len() != n {
                return Err(TradeError::Parse { line: no, msg: format!("word {l} has length {}, expected {n}", w.len()) });
            }
            rows.push(w);
        }
        Ok(GeneratorMatrix { n, rows })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("span n={}\n", self.n);
        for w in &self.rows {
            let _ = writeln!(out, "{w}");
        }
        out
    }

    pub fn span(&self) -> Vec<Word> {
        span(self)
    }
}

/// All GF(2) combinations of the rows, in ascending mask order.
pub fn span(g: &GeneratorMatrix) -> Vec<Word> {
    let bits: Vec<u32> = g.rows.iter().map(|w| w.bits()).collect();
    gf2::span(&bits).into_iter().map(|b| Word::from_raw(b, g.n)).collect()
}

/// The pair `(C \ D, D \ C)`, checked to be a valid trade of `kind`.
pub fn code_difference(c: &[Word], d: &[Word], kind: TradeKind) -> Result<Trade> {
    let cs: BTreeSet<Word> = c.iter().copied().collect();
    let ds: BTreeSet<Word> = d.iter().copied().collect();
    if cs == ds {
        return Err(TradeError::Precondition("the two codes are equal".into()));
    }
    let t0: Vec<Word> = cs.difference(&ds).copied().collect();
    let t1: Vec<Word> = ds.difference(&cs).copied().collect();
    if t0.is_empty() || t1.is_empty() {
        return Err(TradeError::EmptyPart);
    }
    let t = Trade::new(kind, t0, t1)?;
    require_valid(&t, "code difference")?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_words;

    fn trivial() -> Trade {
        Trade::new(TradeKind::Extended1Perfect, parse_words("00").unwrap(), parse_words("11").unwrap()).unwrap()
    }

    #[test]
    fn double_of_trivial_has_volume_two() {
        let t = double(&trivial()).unwrap();
        assert_eq!((t.n(), t.volume()), (4, 2));
    }

    #[test]
    fn parity_latin_trade_small() {
        let l = parity_latin_trade(3, 2).unwrap();
        assert_eq!(l.parts()[0], vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        assert!(l.is_primary_pair(0, 1));
        let l = parity_latin_trade(2, 3).unwrap();
        assert!(l.parts().iter().all(|p| p.len() == 3));
    }

    #[test]
    fn latin_condition_is_checked() {
        let bad = vec![vec![vec![0, 0]], vec![vec![1, 1]]];
        assert!(LatinKWayTrade::new(2, 2, bad).is_err());
    }

    #[test]
    fn concatenation_of_trivial_pieces() {
        let c = KWayTrade::from_trade(&trivial());
        let t = concatenate(&parity_latin_trade(3, 2).unwrap(), &[c.clone(), c.clone(), c]).unwrap();
        let mut expected = parse_words("000000 001111 110011 111100").unwrap();
        expected.sort();
        assert_eq!(t.t0(), expected.as_slice());
    }

    #[test]
    fn symbol_range_is_checked() {
        let c = KWayTrade::from_trade(&trivial());
        let l = parity_latin_trade(2, 3).unwrap();
        assert!(matches!(concatenate_kway(&l, &[c.clone(), c]), Err(TradeError::Precondition(_))));
    }

    #[test]
    fn span_and_text() {
        let g = GeneratorMatrix::parse("span n=4\n1100\n0110\n").unwrap();
        assert_eq!(g.span().len(), 4);
        assert_eq!(GeneratorMatrix::parse(&g.to_text()).unwrap(), g);
        assert_eq!(GeneratorMatrix::new(3, vec![]).unwrap().span(), vec![Word::zero(3).unwrap()]);
    }

    #[test]
    fn equal_codes_have_no_difference() {
        let c = parse_words("0000 1111").unwrap();
        assert!(code_difference(&c, &c, TradeKind::Extended1Perfect).is_err());
    }
}
