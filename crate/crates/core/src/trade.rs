//! Trades, their verification and the structural operations on them.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Result, TradeError};
use crate::gf2;
use crate::word::{full_mask, GraphAutomorphism, Word, MAX_LEN};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TradeKind {
    /// Trade in the halved cube; all words of even weight.
    Extended1Perfect,
    /// Trade in the hypercube with respect to radius-1 balls.
    OnePerfect,
    /// Trade in J(n, k); all words of weight k.
    Steiner(usize),
}

impl fmt::Display for TradeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TradeKind::Extended1Perfect => f.write_str("ext"),
            TradeKind::OnePerfect => f.write_str("perf"),
            TradeKind::Steiner(k) => write!(f, "steiner:{k}"),
        }
    }
}

impl FromStr for TradeKind {
    type Err = TradeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ext" => Ok(TradeKind::Extended1Perfect),
            "perf" => Ok(TradeKind::OnePerfect),
            _ => {
                let k = s
                    .strip_prefix("steiner:")
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| TradeError::Parse { line: 0, msg: format!("unknown trade kind {s:?}") })?;
                Ok(TradeKind::Steiner(k))
            }
        }
    }
}

/// Checks a word list for a common length, duplicates and kind constraints.
fn check_part(kind: TradeKind, n: usize, words: &[Word]) -> Result<()> {
    if words.is_empty() {
        return Err(TradeError::EmptyPart);
    }
    for w in words {
        if w.len() != n {
            return Err(TradeError::LengthMismatch(n, w.len()));
        }
        match kind {
            // the halved cube has two components; a trade lives in one of them
            TradeKind::Extended1Perfect if w.weight() % 2 != words[0].weight() % 2 => {
                return Err(TradeError::WeightViolation { word: w.to_string(), kind: kind.to_string() });
            }
            TradeKind::Steiner(k) if w.weight() != k => {
                return Err(TradeError::WeightViolation { word: w.to_string(), kind: kind.to_string() });
            }
            _ => {}
        }
    }
    for pair in words.windows(2) {
        if pair[0] == pair[1] {
            return Err(TradeError::DuplicateWord(pair[0].to_string()));
        }
    }
    Ok(())
}

fn check_parity(kind: TradeKind, a: &[Word], b: &[Word]) -> Result<()> {
    if kind == TradeKind::Extended1Perfect && a[0].weight() % 2 != b[0].weight() % 2 {
        return Err(TradeError::WeightViolation { word: b[0].to_string(), kind: kind.to_string() });
    }
    Ok(())
}

fn sorted(mut words: Vec<Word>) -> Vec<Word> {
    words.sort_unstable();
    words
}

fn shared_word(a: &[Word], b: &[Word]) -> Option<Word> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return Some(a[i]),
        }
    }
    None
}

/// A pair of disjoint word sets of equal size. Parts are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Trade {
    n: usize,
    kind: TradeKind,
    t0: Vec<Word>,
    t1: Vec<Word>,
}

impl Trade {
    /// Builds a trade after checking disjointness, sizes and weight
    /// constraints. Validity of the trade condition is left to `verify`.
    pub fn new(kind: TradeKind, t0: Vec<Word>, t1: Vec<Word>) -> Result<Self> {
        let t0 = sorted(t0);
        let t1 = sorted(t1);
        let n = t0.first().ok_or(TradeError::EmptyPart)?.len();
        check_part(kind, n, &t0)?;
        check_part(kind, n, &t1)?;
        if t0.len() != t1.len() {
            return Err(TradeError::UnequalVolume(t0.len(), t1.len()));
        }
        if let Some(w) = shared_word(&t0, &t1) {
            return Err(TradeError::NotDisjoint(w.to_string()));
        }
        check_parity(kind, &t0, &t1)?;
        if kind == TradeKind::OnePerfect && n % 2 == 0 {
            return Err(TradeError::Unsupported(format!("1-perfect trade of even length {n}")));
        }
        if kind == TradeKind::Extended1Perfect && n % 2 == 1 {
            return Err(TradeError::Unsupported(format!("extended trade of odd length {n}")));
        }
        Ok(Trade { n, kind, t0, t1 })
    }

    /// Shorthand for an extended 1-perfect trade from raw masks.
    pub fn extended_from_bits(n: usize, t0: &[u32], t1: &[u32]) -> Result<Self> {
        let conv = |v: &[u32]| v.iter().map(|&b| Word::new(b, n)).collect::<Result<Vec<_>>>();
        Trade::new(TradeKind::Extended1Perfect, conv(t0)?, conv(t1)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> TradeKind {
        self.kind
    }

    pub fn t0(&self) -> &[Word] {
        &self.t0
    }

    pub fn t1(&self) -> &[Word] {
        &self.t1
    }

    pub fn part(&self, i: usize) -> &[Word] {
        if i == 0 {
            &self.t0
        } else {
            &self.t1
        }
    }

    /// `|T0|`.
    pub fn volume(&self) -> usize {
        self.t0.len()
    }

    /// `T0 ∪ T1`, ascending.
    pub fn words(&self) -> Vec<Word> {
        let mut all: Vec<Word> = self.t0.iter().chain(&self.t1).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn t0_bits(&self) -> Vec<u32> {
        self.t0.iter().map(|w| w.bits()).collect()
    }

    pub fn t1_bits(&self) -> Vec<u32> {
        self.t1.iter().map(|w| w.bits()).collect()
    }

    pub fn swapped(&self) -> Trade {
        Trade { n: self.n, kind: self.kind, t0: self.t1.clone(), t1: self.t0.clone() }
    }

    pub fn with_kind(&self, kind: TradeKind) -> Result<Trade> {
        Trade::new(kind, self.t0.clone(), self.t1.clone())
    }

    /// Image under a graph automorphism.
    pub fn apply(&self, g: &GraphAutomorphism) -> Result<Trade> {
        if g.perm.len() != self.n {
            return Err(TradeError::LengthMismatch(self.n, g.perm.len()));
        }
        let map = |v: &[Word]| v.iter().map(|&w| g.apply(w)).collect::<Vec<_>>();
        Trade::new(self.kind, map(&self.t0), map(&self.t1))
    }

    pub fn verify(&self) -> VerifyReport {
        let t0 = self.t0_bits();
        let t1 = self.t1_bits();
        match self.kind {
            TradeKind::Extended1Perfect => verify_extended_sets(self.n, &t0, &t1),
            TradeKind::OnePerfect => verify_1perfect_sets(self.n, &t0, &t1),
            TradeKind::Steiner(k) => verify_steiner_sets(self.n, k, &t0, &t1),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.verify().valid
    }

    fn adjacent(&self, a: u32, b: u32) -> bool {
        let d = (a ^ b).count_ones();
        match self.kind {
            TradeKind::OnePerfect => d == 1 || d == 2,
            _ => d == 2,
        }
    }

    /// Connected components of the distance graph on `T0 ∪ T1`.
    fn components(&self) -> Vec<Vec<u32>> {
        let all: Vec<u32> = self.words().iter().map(|w| w.bits()).collect();
        let mut seen = vec![false; all.len()];
        let mut comps = Vec::new();
        for s in 0..all.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![all[s]];
            let mut queue = VecDeque::from([s]);
            while let Some(i) = queue.pop_front() {
                for j in 0..all.len() {
                    if !seen[j] && self.adjacent(all[i], all[j]) {
                        seen[j] = true;
                        comp.push(all[j]);
                        queue.push_back(j);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }
}

impl fmt::Display for Trade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::write_trade(self))
    }
}

/// Ordered tuple of `k >= 2` pairwise disjoint, equally sized word sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KWayTrade {
    n: usize,
    kind: TradeKind,
    parts: Vec<Vec<Word>>,
}

impl KWayTrade {
    pub fn new(kind: TradeKind, parts: Vec<Vec<Word>>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(TradeError::Precondition(format!("a k-way trade needs k >= 2 parts, got {}", parts.len())));
        }
        let parts: Vec<Vec<Word>> = parts.into_iter().map(sorted).collect();
        let n = parts[0].first().ok_or(TradeError::EmptyPart)?.len();
        for p in &parts {
            check_part(kind, n, p)?;
            if p.len() != parts[0].len() {
                return Err(TradeError::UnequalVolume(parts[0].len(), p.len()));
            }
            check_parity(kind, &parts[0], p)?;
        }
        for i in 0..parts.len() {
            for j in (i + 1)..parts.len() {
                if let Some(w) = shared_word(&parts[i], &parts[j]) {
                    return Err(TradeError::NotDisjoint(w.to_string()));
                }
            }
        }
        Ok(KWayTrade { n, kind, parts })
    }

    pub fn from_trade(t: &Trade) -> Self {
        KWayTrade { n: t.n, kind: t.kind, parts: vec![t.t0.clone(), t.t1.clone()] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> TradeKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<Word>] {
        &self.parts
    }

    pub fn volume(&self) -> usize {
        self.parts[0].len()
    }

    /// The 2-way trade formed by parts `i` and `j`.
    pub fn pair(&self, i: usize, j: usize) -> Result<Trade> {
        Trade::new(self.kind, self.parts[i].clone(), self.parts[j].clone())
    }

    /// Valid iff every pair of parts forms a valid trade.
    pub fn is_valid(&self) -> bool {
        (0..self.k()).all(|i| ((i + 1)..self.k()).all(|j| self.pair(i, j).map(|t| t.is_valid()).unwrap_or(false)))
    }
}

/// A failed local condition found by a verifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub description: String,
    pub count0: usize,
    pub count1: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (T0: {}, T1: {})", self.description, self.count0, self.count1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    /// Number of trade words having a given number of opposite-part neighbours.
    pub degree_histogram: BTreeMap<usize, usize>,
}

impl VerifyReport {
    fn finish(violations: Vec<Violation>, degree_histogram: BTreeMap<usize, usize>) -> Self {
        VerifyReport { valid: violations.is_empty(), violations, degree_histogram }
    }
}

fn fmt_bits(b: u32, n: usize) -> String {
    Word::from_raw(b & full_mask(n), n).to_string()
}

fn degree_histogram(t0: &[u32], t1: &[u32], adjacent: impl Fn(u32, u32) -> bool) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for (a, b) in [(t0, t1), (t1, t0)] {
        for &x in a {
            let d = b.iter().filter(|&&y| adjacent(x, y)).count();
            *hist.entry(d).or_insert(0) += 1;
        }
    }
    hist
}

/// Trade condition in the halved cube: no two words of one part at
/// distance 2 and every word with exactly `n/2` opposite-part words at
/// distance 2. Words outside the parity class of the first word are
/// reported as violations.
pub fn verify_extended_sets(n: usize, t0: &[u32], t1: &[u32]) -> VerifyReport {
    let mut v = Vec::new();
    if n % 2 == 1 {
        v.push(Violation { description: format!("odd length {n}"), count0: 0, count1: 0 });
        return VerifyReport::finish(v, BTreeMap::new());
    }
    let adj = |a: u32, b: u32| (a ^ b).count_ones() == 2;
    let parity = t0.first().or(t1.first()).map_or(0, |w| w.count_ones() % 2);
    for (idx, part) in [t0, t1].into_iter().enumerate() {
        for &x in part {
            if x.count_ones() % 2 != parity {
                v.push(Violation {
                    description: format!("word {} of T{idx} has the wrong parity", fmt_bits(x, n)),
                    count0: 0,
                    count1: 0,
                });
            }
        }
        for (i, &x) in part.iter().enumerate() {
            for &y in &part[i + 1..] {
                if adj(x, y) {
                    v.push(Violation {
                        description: format!("T{idx} words {} and {} at distance 2", fmt_bits(x, n), fmt_bits(y, n)),
                        count0: 0,
                        count1: 0,
                    });
                }
            }
        }
    }
    if let Some(&w) = t0.iter().find(|w| t1.contains(w)) {
        v.push(Violation { description: format!("word {} in both parts", fmt_bits(w, n)), count0: 1, count1: 1 });
    }
    for (idx, (a, b)) in [(t0, t1), (t1, t0)].into_iter().enumerate() {
        for &x in a {
            let d = b.iter().filter(|&&y| adj(x, y)).count();
            if d != n / 2 {
                let (c0, c1) = if idx == 0 { (0, d) } else { (d, 0) };
                v.push(Violation {
                    description: format!("T{idx} word {} has {d} opposite neighbours, expected {}", fmt_bits(x, n), n / 2),
                    count0: c0,
                    count1: c1,
                });
            }
        }
    }
    VerifyReport::finish(v, degree_histogram(t0, t1, adj))
}

/// Radius-1 ball condition in the hypercube over every centre.
pub fn verify_1perfect_sets(n: usize, t0: &[u32], t1: &[u32]) -> VerifyReport {
    let mut v = Vec::new();
    if n % 2 == 0 {
        v.push(Violation { description: format!("even length {n}"), count0: 0, count1: 0 });
        return VerifyReport::finish(v, BTreeMap::new());
    }
    let c0 = ball_counts(n, t0);
    let c1 = ball_counts(n, t1);
    for c in 0..(1usize << n) {
        let (a, b) = (c0[c] as usize, c1[c] as usize);
        if a != b || a > 1 {
            v.push(Violation { description: format!("ball around {}", fmt_bits(c as u32, n)), count0: a, count1: b });
        }
    }
    VerifyReport::finish(v, degree_histogram(t0, t1, |a, b| (a ^ b).count_ones() <= 2))
}

fn ball_counts(n: usize, words: &[u32]) -> Vec<u8> {
    let mut cnt = vec![0u8; 1 << n];
    for &w in words {
        cnt[w as usize] = cnt[w as usize].saturating_add(1);
        for i in 0..n {
            let c = (w ^ (1 << i)) as usize;
            cnt[c] = cnt[c].saturating_add(1);
        }
    }
    cnt
}

/// Maximum-clique condition in J(n, k): cliques are indexed by
/// weight-(k-1) words and, when `n = 2k`, also by weight-(k+1) words.
pub fn verify_steiner_sets(n: usize, k: usize, t0: &[u32], t1: &[u32]) -> VerifyReport {
    let mut v = Vec::new();
    for (idx, part) in [t0, t1].into_iter().enumerate() {
        for &x in part {
            if x.count_ones() as usize != k {
                v.push(Violation {
                    description: format!("T{idx} word {} has weight other than {k}", fmt_bits(x, n)),
                    count0: 0,
                    count1: 0,
                });
            }
        }
    }
    if k == 0 || k > n || !v.is_empty() {
        if v.is_empty() {
            v.push(Violation { description: format!("weight {k} out of range for length {n}"), count0: 0, count1: 0 });
        }
        return VerifyReport::finish(v, BTreeMap::new());
    }
    let mut c0 = vec![0u16; 1 << n];
    let mut c1 = vec![0u16; 1 << n];
    for (part, cnt) in [(t0, &mut c0), (t1, &mut c1)] {
        for &w in part {
            for i in 0..n {
                let c = (w ^ (1 << i)) as usize;
                cnt[c] += 1;
            }
        }
    }
    for c in 0..(1usize << n) {
        let wt = c.count_ones() as usize;
        if wt + 1 != k && !(n == 2 * k && wt == k + 1) {
            continue;
        }
        let (a, b) = (c0[c] as usize, c1[c] as usize);
        if a != b || a > 1 {
            v.push(Violation { description: format!("clique at {}", fmt_bits(c as u32, n)), count0: a, count1: b });
        }
    }
    VerifyReport::finish(v, degree_histogram(t0, t1, |a, b| (a ^ b).count_ones() == 2))
}

pub fn verify_extended(t: &Trade) -> Result<VerifyReport> {
    expect_kind(t, TradeKind::Extended1Perfect)?;
    Ok(t.verify())
}

pub fn verify_1perfect(t: &Trade) -> Result<VerifyReport> {
    expect_kind(t, TradeKind::OnePerfect)?;
    Ok(t.verify())
}

pub fn verify_steiner(t: &Trade) -> Result<VerifyReport> {
    match t.kind() {
        TradeKind::Steiner(_) => Ok(t.verify()),
        other => Err(TradeError::KindMismatch { expected: "steiner:k".into(), found: other.to_string() }),
    }
}

fn expect_kind(t: &Trade, kind: TradeKind) -> Result<()> {
    if t.kind() != kind {
        return Err(TradeError::KindMismatch { expected: kind.to_string(), found: t.kind().to_string() });
    }
    Ok(())
}

fn require_valid(t: &Trade) -> Result<()> {
    let r = t.verify();
    if !r.valid {
        return Err(TradeError::InvalidTrade(
            r.violations.first().map(|v| v.to_string()).unwrap_or_default(),
        ));
    }
    Ok(())
}

/// True iff the distance graph on `T0 ∪ T1` is connected.
pub fn is_primary(t: &Trade) -> Result<bool> {
    require_valid(t)?;
    Ok(t.components().len() == 1)
}

/// Connected components of a trade, each as a trade of its own.
pub fn primary_components(t: &Trade) -> Result<Vec<Trade>> {
    require_valid(t)?;
    let t0: HashSet<u32> = t.t0_bits().into_iter().collect();
    t.components()
        .into_iter()
        .map(|comp| {
            let (a, b): (Vec<u32>, Vec<u32>) = comp.into_iter().partition(|w| t0.contains(w));
            let conv = |v: Vec<u32>| v.into_iter().map(|x| Word::from_raw(x, t.n)).collect();
            Trade::new(t.kind, conv(a), conv(b))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplementSymmetry {
    SwapsParts,
    FixesParts,
    Neither,
}

pub fn complement_symmetry(t: &Trade) -> ComplementSymmetry {
    let comp = |v: &[Word]| sorted(v.iter().map(|w| w.complement()).collect());
    let c0 = comp(&t.t0);
    if c0 == t.t1 {
        ComplementSymmetry::SwapsParts
    } else if c0 == t.t0 && comp(&t.t1) == t.t1 {
        ComplementSymmetry::FixesParts
    } else {
        ComplementSymmetry::Neither
    }
}

/// Graphs in which the characteristic function of a trade is an eigenfunction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    /// H(n): neighbours at distance 1.
    Hypercube,
    /// ½H(n) on the parity class of the trade: neighbours at distance 2.
    HalvedCube,
    /// J(n, k).
    Johnson(usize),
}

/// Checks `theta * f(x) = Σ_{y ~ x} f(y)` at every vertex, where `f` is
/// `+1` on `t0`, `-1` on `t1` and 0 elsewhere.
pub fn is_eigenfunction(n: usize, t0: &[u32], t1: &[u32], ambient: Ambient, theta: i64) -> bool {
    assert!(n <= MAX_LEN);
    let mut f = vec![0i64; 1 << n];
    for &w in t0 {
        f[w as usize] += 1;
    }
    for &w in t1 {
        f[w as usize] -= 1;
    }
    let parity = t0.first().or(t1.first()).map(|w| w.count_ones() % 2).unwrap_or(0);
    for x in 0u32..(1 << n) {
        let sum: i64 = match ambient {
            Ambient::Hypercube => (0..n).map(|i| f[(x ^ (1 << i)) as usize]).sum(),
            Ambient::HalvedCube => {
                if x.count_ones() % 2 != parity {
                    continue;
                }
                let mut s = 0;
                for i in 0..n {
                    for j in (i + 1)..n {
                        s += f[(x ^ (1 << i) ^ (1 << j)) as usize];
                    }
                }
                s
            }
            Ambient::Johnson(k) => {
                if x.count_ones() as usize != k {
                    continue;
                }
                let mut s = 0;
                for i in 0..n {
                    if x >> i & 1 == 0 {
                        continue;
                    }
                    for j in 0..n {
                        if x >> j & 1 == 0 {
                            s += f[(x ^ (1 << i) ^ (1 << j)) as usize];
                        }
                    }
                }
                s
            }
        };
        if sum != theta * f[x as usize] {
            return false;
        }
    }
    true
}

/// The eigenvalue tests appropriate to the trade kind: `-1` in H(n) for
/// 1-perfect trades, `-n/2` in ½H(n) and `0` in H(n) for extended trades,
/// `-k` in J(n, k) for Steiner trades.
pub fn eigenfunction_check(t: &Trade) -> bool {
    let (n, t0, t1) = (t.n, t.t0_bits(), t.t1_bits());
    match t.kind {
        TradeKind::OnePerfect => is_eigenfunction(n, &t0, &t1, Ambient::Hypercube, -1),
        TradeKind::Extended1Perfect => {
            is_eigenfunction(n, &t0, &t1, Ambient::HalvedCube, -(n as i64) / 2)
                && is_eigenfunction(n, &t0, &t1, Ambient::Hypercube, 0)
        }
        TradeKind::Steiner(k) => is_eigenfunction(n, &t0, &t1, Ambient::Johnson(k), -(k as i64)),
    }
}

/// Appends an overall parity bit to a 1-perfect trade.
pub fn extend_parity(t: &Trade) -> Result<Trade> {
    expect_kind(t, TradeKind::OnePerfect)?;
    require_valid(t)?;
    let ext = |v: &[Word]| v.iter().map(|w| w.append(w.weight() % 2 == 1)).collect::<Result<Vec<_>>>();
    let out = Trade::new(TradeKind::Extended1Perfect, ext(&t.t0)?, ext(&t.t1)?)?;
    require_valid(&out)?;
    Ok(out)
}

/// Deletes coordinate `i` from every word of an extended trade.
pub fn puncture(t: &Trade, i: usize) -> Result<Trade> {
    expect_kind(t, TradeKind::Extended1Perfect)?;
    if i >= t.n {
        return Err(TradeError::CoordinateOutOfRange { coord: i, n: t.n });
    }
    let del = |v: &[Word]| v.iter().map(|w| w.delete(i)).collect::<Result<Vec<_>>>();
    let out = Trade::new(TradeKind::OnePerfect, del(&t.t0)?, del(&t.t1)?)?;
    require_valid(&out)?;
    Ok(out)
}

/// `S = K + R` where `K = {x : S + x = S}` is the kernel and `R` holds the
/// least representative, in string order, of every coset of `K` meeting `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelDecomposition {
    pub kernel: Vec<Word>,
    pub representatives: Vec<Word>,
}

impl KernelDecomposition {
    /// Reduced basis of the kernel (pivots at the leftmost coordinates),
    /// listed in string order.
    pub fn basis(&self) -> Vec<Word> {
        let n = self.kernel.first().map(|w| w.len()).unwrap_or(1);
        let bits: Vec<u32> = self.kernel.iter().map(|w| w.bits()).collect();
        let mut out: Vec<Word> = gf2::reduced_basis(&bits).into_iter().map(|b| Word::from_raw(b, n)).collect();
        out.sort_by_key(|w| w.lex_key());
        out
    }

    /// `⟨b1,b2,…⟩+r1,r2,…`
    pub fn display(&self) -> String {
        let basis: Vec<String> = self.basis().iter().map(|w| w.to_string()).collect();
        let reps: Vec<String> = self.representatives.iter().map(|w| w.to_string()).collect();
        format!("⟨{}⟩+{}", basis.join(","), reps.join(","))
    }
}

pub fn kernel_decomposition(s: &[Word]) -> Result<KernelDecomposition> {
    let s0 = *s.first().ok_or(TradeError::EmptyPart)?;
    let n = s0.len();
    let set: HashSet<u32> = s.iter().map(|w| w.bits()).collect();
    let mut kernel: Vec<Word> = set
        .iter()
        .map(|&w| w ^ s0.bits())
        .filter(|&x| set.iter().all(|&w| set.contains(&(w ^ x))))
        .map(|x| Word::from_raw(x, n))
        .collect();
    kernel.sort_unstable();
    let mut covered: HashSet<u32> = HashSet::new();
    let mut by_lex: Vec<Word> = set.iter().map(|&b| Word::from_raw(b, n)).collect();
    by_lex.sort_by_key(|w| w.lex_key());
    let mut representatives = Vec::new();
    for w in by_lex {
        if covered.contains(&w.bits()) {
            continue;
        }
        for k in &kernel {
            covered.insert(w.bits() ^ k.bits());
        }
        representatives.push(w);
    }
    Ok(KernelDecomposition { kernel, representatives })
}

/// Girth of the distance graph on `T0 ∪ T1`; `None` if it is a forest.
pub fn girth(t: &Trade) -> Option<usize> {
    let all: Vec<u32> = t.words().iter().map(|w| w.bits()).collect();
    let m = all.len();
    let adj: Vec<Vec<usize>> = (0..m)
        .map(|i| (0..m).filter(|&j| j != i && t.adjacent(all[i], all[j])).collect())
        .collect();
    let mut best: Option<usize> = None;
    for s in 0..m {
        let mut dist = vec![usize::MAX; m];
        let mut parent = vec![usize::MAX; m];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v {
                    let cycle = dist[u] + dist[v] + 1;
                    best = Some(best.map_or(cycle, |b| b.min(cycle)));
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(list: &[&str]) -> Vec<Word> {
        list.iter().map(|s| Word::parse(s).unwrap()).collect()
    }

    fn six() -> Trade {
        Trade::new(
            TradeKind::Extended1Perfect,
            words(&["000000", "111100", "110011", "001111"]),
            words(&["111111", "000011", "001100", "110000"]),
        )
        .unwrap()
    }

    #[test]
    fn length_six_trade_is_valid_and_primary() {
        let t = six();
        assert!(verify_extended(&t).unwrap().valid);
        assert!(is_primary(&t).unwrap());
        assert_eq!(complement_symmetry(&t), ComplementSymmetry::SwapsParts);
        assert!(eigenfunction_check(&t));
    }

    #[test]
    fn trivial_trade() {
        let t = Trade::new(TradeKind::Extended1Perfect, words(&["00"]), words(&["11"])).unwrap();
        assert!(t.is_valid());
        assert_eq!(girth(&t), None);
        assert!(is_eigenfunction(2, &[0], &[3], Ambient::HalvedCube, -1));
    }

    #[test]
    fn perturbed_word_breaks_the_trade() {
        let t0 = [0b000000, 0b001011, 0b110011, 0b111100];
        let t1: Vec<u32> = six().t1_bits();
        let r = verify_extended_sets(6, &t0, &t1);
        assert!(!r.valid);
        assert!(r.violations.iter().any(|v| v.description.contains("wrong parity")));
        assert!(r.violations.iter().any(|v| v.description.contains("opposite neighbours")));
    }

    #[test]
    fn construction_rejects_degenerate_input() {
        let a = words(&["0011", "1100"]);
        assert!(matches!(
            Trade::new(TradeKind::Extended1Perfect, a.clone(), a.clone()),
            Err(TradeError::NotDisjoint(_))
        ));
        assert!(matches!(
            Trade::new(TradeKind::Extended1Perfect, a.clone(), words(&["0101"])),
            Err(TradeError::UnequalVolume(2, 1))
        ));
        assert!(matches!(
            Trade::new(TradeKind::Steiner(3), words(&["111000", "111000"]), words(&["000111", "100011"])),
            Err(TradeError::DuplicateWord(_))
        ));
    }

    #[test]
    fn puncture_and_extend_round_trip() {
        let t = six();
        let p = puncture(&t, 5).unwrap();
        assert_eq!(p.n(), 5);
        assert!(verify_1perfect(&p).unwrap().valid);
        assert!(eigenfunction_check(&p));
        assert_eq!(extend_parity(&p).unwrap(), t);
    }

    #[test]
    fn one_perfect_ball_counts_detect_missing_word() {
        let p = puncture(&six(), 5).unwrap();
        let t1 = &p.t1_bits()[1..];
        assert!(!verify_1perfect_sets(5, &p.t0_bits(), t1).valid);
    }

    #[test]
    fn steiner_example_block_trade() {
        let blocks = |list: &[&str]| -> Vec<Word> {
            list.iter()
                .map(|b| {
                    let support: Vec<usize> = b.chars().map(|c| c.to_digit(16).unwrap() as usize).collect();
                    Word::from_support(&support, 6).unwrap()
                })
                .collect()
        };
        let t = Trade::new(TradeKind::Steiner(3), blocks(&["012", "034", "135", "245"]), blocks(&["013", "024", "125", "345"]))
            .unwrap();
        assert!(verify_steiner(&t).unwrap().valid);
        assert!(eigenfunction_check(&t));
    }

    #[test]
    fn kernel_of_singleton_and_subspace() {
        let w = Word::parse("0110").unwrap();
        let d = kernel_decomposition(&[w]).unwrap();
        assert_eq!(d.kernel, vec![Word::zero(4).unwrap()]);
        assert_eq!(d.representatives, vec![w]);
        let space = words(&["0000", "1100", "0011", "1111"]);
        let d = kernel_decomposition(&space).unwrap();
        assert_eq!(d.kernel, sorted(space));
        assert_eq!(d.representatives, vec![Word::zero(4).unwrap()]);
    }

    #[test]
    fn girth_of_length_six_trade() {
        // 000000 ~ 000011 ~ 110011 ~ 110000 ~ 000000
        assert_eq!(girth(&six()), Some(4));
    }
}
