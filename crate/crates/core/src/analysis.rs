//! Dual spaces, affine rank, derived Steiner trades and the small Witt
//! design.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::canonical::{canonical_form, CanonicalForm};
use crate::error::{Result, TradeError};
use crate::gf2;
use crate::trade::{verify_steiner_sets, Trade, TradeKind};
use crate::word::{full_mask, CoordPermutation, Word};

/// Words whose inner product with every word of a set has the same parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSpace {
    pub n: usize,
    /// Ascending by mask.
    pub members: Vec<Word>,
    /// Indicators of the coordinate classes on which every member is
    /// constant, where such an indicator is itself a member. For a primary
    /// trade these have disjoint supports and span `members`.
    pub standard_basis: Vec<Word>,
}

impl DualSpace {
    /// GF(2) dimension of the dual space.
    pub fn dimension(&self) -> usize {
        self.members.len().trailing_zeros() as usize
    }

    pub fn contains(&self, w: Word) -> bool {
        self.members.binary_search(&w).is_ok()
    }

    /// Closed under the coordinate-wise product.
    pub fn is_product_closed(&self) -> bool {
        self.members.iter().all(|&a| self.members.iter().all(|&b| self.contains(a.and(b))))
    }

    /// True iff the standard basis spans the members.
    pub fn basis_spans(&self) -> bool {
        let bits: Vec<u32> = self.standard_basis.iter().map(|w| w.bits()).collect();
        gf2::span(&bits).len() == self.members.len()
    }
}

pub fn dual_space(s: &[Word]) -> Result<DualSpace> {
    let n = s.first().ok_or(TradeError::Precondition("dual space of an empty set".into()))?.len();
    if let Some(w) = s.iter().find(|w| w.len() != n) {
        return Err(TradeError::LengthMismatch(w.len(), n));
    }
    let bits: Vec<u32> = s.iter().map(|w| w.bits()).collect();
    let members: Vec<u32> = (0..1u32 << n)
        .filter(|&x| {
            let p = (x & bits[0]).count_ones() & 1;
            bits.iter().all(|&c| (x & c).count_ones() & 1 == p)
        })
        .collect();
    // group coordinates by their column over all members
    let mut classes: BTreeMap<Vec<bool>, u32> = BTreeMap::new();
    for i in 0..n {
        let col: Vec<bool> = members.iter().map(|&x| (x >> i) & 1 == 1).collect();
        if col.iter().any(|&b| b) {
            *classes.entry(col).or_insert(0) |= 1 << i;
        }
    }
    let mut basis: Vec<u32> = classes.into_values().filter(|ind| members.binary_search(ind).is_ok()).collect();
    basis.sort_by_key(|&b| Word::from_raw(b, n).lex_key());
    basis.reverse();
    Ok(DualSpace {
        n,
        members: members.into_iter().map(|x| Word::from_raw(x, n)).collect(),
        standard_basis: basis.into_iter().map(|x| Word::from_raw(x, n)).collect(),
    })
}

/// Dimension of the smallest affine subspace containing `s`.
pub fn affine_rank(s: &[Word]) -> Result<usize> {
    let first = s.first().ok_or(TradeError::Precondition("affine rank of an empty set".into()))?;
    let diffs: Vec<u32> = s.iter().map(|w| w.bits() ^ first.bits()).collect();
    Ok(gf2::rank(&diffs))
}

/// Affine rank of `T0` and the increase contributed by `T1`, as printed in
/// the form `a+b`.
pub fn rank_split(t: &Trade) -> (usize, usize) {
    let r0 = affine_rank(t.t0()).expect("parts are nonempty");
    let all = affine_rank(&t.words()).expect("parts are nonempty");
    (r0, all - r0)
}

fn min_distance(t: &Trade, x: u32) -> (u32, u32) {
    let d = |p: &[Word]| p.iter().map(|w| (w.bits() ^ x).count_ones()).min().unwrap_or(u32::MAX);
    (d(t.t0()), d(t.t1()))
}

/// The Steiner trade formed by the words of `T0 + x` and `T1 + x` at the
/// minimum distance `k` from `x`, or `None` if they do not form one.
pub fn derive_steiner(t: &Trade, x: Word) -> Result<Option<Trade>> {
    if x.len() != t.n() {
        return Err(TradeError::LengthMismatch(x.len(), t.n()));
    }
    let (d0, d1) = min_distance(t, x.bits());
    let k = d0.min(d1);
    if k == 0 {
        return Err(TradeError::Precondition(format!("centre {x} lies in the trade")));
    }
    Ok(derive_at(t, x.bits(), k as usize))
}

fn derive_at(t: &Trade, x: u32, k: usize) -> Option<Trade> {
    let n = t.n();
    let near = |p: &[Word]| -> Vec<u32> {
        p.iter().map(|w| w.bits() ^ x).filter(|v| v.count_ones() as usize == k).collect()
    };
    let (s0, s1) = (near(t.t0()), near(t.t1()));
    if s0.is_empty() || s1.is_empty() || s0.len() != s1.len() || !verify_steiner_sets(n, k, &s0, &s1).valid {
        return None;
    }
    let conv = |v: Vec<u32>| v.into_iter().map(|b| Word::from_raw(b, n)).collect();
    Trade::new(TradeKind::Steiner(k), conv(s0), conv(s1)).ok()
}

#[derive(Clone, Debug)]
pub struct DerivedEntry {
    pub key: CanonicalForm,
    /// Derived from the smallest centre of this class.
    pub representative: Trade,
    pub count: u64,
}

#[derive(Clone, Debug)]
pub struct DerivedCatalog {
    pub k: usize,
    /// Sorted by key.
    pub entries: Vec<DerivedEntry>,
    /// Centres at distance `k` whose words did not form a Steiner trade.
    pub failures: u64,
}

impl DerivedCatalog {
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.count).sum::<u64>() + self.failures
    }

    pub fn count_of(&self, key: &CanonicalForm) -> u64 {
        self.entries.iter().find(|e| &e.key == key).map_or(0, |e| e.count)
    }
}

/// Classifies the Steiner trades derived from every centre at minimum
/// distance exactly `k` from `T0 ∪ T1`.
pub fn derived_catalog(t: &Trade, k: usize) -> DerivedCatalog {
    let n = t.n();
    let centres: Vec<u32> = (0..1u32 << n)
        .filter(|&x| {
            let (d0, d1) = min_distance(t, x);
            let d = d0.min(d1) as usize;
            if d == k && t.kind() != TradeKind::OnePerfect {
                debug_assert_eq!(d0, d1, "valid trades are equidistant from their centres");
            }
            d == k
        })
        .collect();
    let derived: Vec<(u32, Option<Trade>)> = centres.par_iter().map(|&x| (x, derive_at(t, x, k))).collect();
    let keyed: Vec<(u32, Option<(CanonicalForm, Trade)>)> = derived
        .into_par_iter()
        .map(|(x, d)| (x, d.map(|s| (canonical_form(&s), s))))
        .collect();
    let mut classes: BTreeMap<CanonicalForm, (Trade, u64)> = BTreeMap::new();
    let mut failures = 0;
    // centres ascend, so the first trade kept per class comes from the smallest one
    for (_, d) in keyed {
        match d {
            Some((key, s)) => classes.entry(key).or_insert((s, 0)).1 += 1,
            None => failures += 1,
        }
    }
    DerivedCatalog {
        k,
        entries: classes
            .into_iter()
            .map(|(key, (representative, count))| DerivedEntry { key, representative, count })
            .collect(),
        failures,
    }
}

/// Distance from off-trade words used for the derived catalogs of the
/// constant-weight length-12 trades.
pub const UNIFORMITY_DISTANCE: usize = 3;

/// True iff all derived trades at distance [`UNIFORMITY_DISTANCE`] are
/// equivalent.
pub fn is_sts_uniform(t: &Trade) -> bool {
    derived_catalog(t, UNIFORMITY_DISTANCE).entries.len() == 1
}

const WITT_BASE: &str = "000001011111";
const WITT_GENERATORS: [&str; 3] = ["(0123456789a)", "(13954)(267a8)", "(0b)(1a)(25)(37)(48)(69)"];

/// Orbit of `w` under the group generated by `gens`, ascending.
pub fn orbit(w: Word, gens: &[CoordPermutation]) -> Vec<Word> {
    let mut seen = std::collections::BTreeSet::from([w]);
    let mut stack = vec![w];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// The Steiner system S(5,6,12) as an orbit of PSL(2,11) on 12 points.
pub fn witt_design() -> Vec<Word> {
    let gens: Vec<CoordPermutation> =
        WITT_GENERATORS.iter().map(|g| CoordPermutation::parse_cycles(g, 12).expect("valid cycles")).collect();
    let blocks = orbit(Word::parse(WITT_BASE).expect("valid word"), &gens);
    assert_eq!(blocks.len(), 132);
    blocks
}

/// Exact cover by dancing links. Column 0 is the header.
struct Dlx {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row: Vec<usize>,
    size: Vec<usize>,
}

impl Dlx {
    fn new(columns: usize) -> Self {
        let total = columns + 1;
        let mut d = Dlx {
            left: (0..total).map(|i| if i == 0 { columns } else { i - 1 }).collect(),
            right: (0..total).map(|i| (i + 1) % total).collect(),
            up: (0..total).collect(),
            down: (0..total).collect(),
            col: (0..total).collect(),
            row: vec![usize::MAX; total],
            size: vec![0; total],
        };
        d.size[0] = usize::MAX;
        d
    }

    fn add_row(&mut self, r: usize, cols: &[usize]) {
        let first = self.col.len();
        for (i, &c) in cols.iter().enumerate() {
            let node = first + i;
            let c = c + 1;
            self.col.push(c);
            self.row.push(r);
            self.up.push(self.up[c]);
            self.down.push(c);
            let u = self.up[c];
            self.down[u] = node;
            self.up[c] = node;
            self.size[c] += 1;
            self.left.push(if i == 0 { first + cols.len() - 1 } else { node - 1 });
            self.right.push(if i + 1 == cols.len() { first } else { node + 1 });
        }
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    /// First exact cover found, as row ids; columns with the fewest
    /// remaining rows are branched on first, ties by lowest index.
    fn solve(&mut self, picked: &mut Vec<usize>) -> bool {
        if self.right[0] == 0 {
            return true;
        }
        let mut c = self.right[0];
        let mut best = c;
        while c != 0 {
            if self.size[c] < self.size[best] {
                best = c;
            }
            c = self.right[c];
        }
        if self.size[best] == 0 {
            return false;
        }
        self.cover(best);
        let mut r = self.down[best];
        while r != best {
            picked.push(self.row[r]);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.col[j]);
                j = self.right[j];
            }
            if self.solve(picked) {
                return true;
            }
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.col[j]);
                j = self.left[j];
            }
            picked.pop();
            r = self.down[r];
        }
        self.uncover(best);
        false
    }
}

/// Completes `seed` to a Steiner system S(5,6,12), if possible. The result
/// is ascending and contains `seed`.
pub fn witt_completion(seed: &[Word]) -> Result<Option<Vec<Word>>> {
    if let Some(w) = seed.iter().find(|w| w.len() != 12 || w.weight() != 6) {
        return Err(TradeError::Precondition(format!("{w} is not a weight-6 word of length 12")));
    }
    let five: Vec<u32> = (0..1u32 << 12).filter(|x| x.count_ones() == 5).collect();
    let index: BTreeMap<u32, usize> = five.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let covered = |b: u32| -> Vec<usize> {
        let mut rest = b;
        let mut out = Vec::with_capacity(6);
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest ^= bit;
            out.push(index[&(b ^ bit)]);
        }
        out
    };
    let mut taken = vec![false; five.len()];
    for w in seed {
        for c in covered(w.bits()) {
            if taken[c] {
                return Ok(None);
            }
            taken[c] = true;
        }
    }
    // only the still uncovered 5-subsets become columns
    let mut colmap = vec![usize::MAX; five.len()];
    let mut ncols = 0;
    for (i, &t) in taken.iter().enumerate() {
        if !t {
            colmap[i] = ncols;
            ncols += 1;
        }
    }
    let mut dlx = Dlx::new(ncols);
    let blocks: Vec<u32> = (0..1u32 << 12).filter(|x| x.count_ones() == 6).collect();
    let mut rows = Vec::new();
    for &b in &blocks {
        let cs = covered(b);
        if cs.iter().all(|&c| !taken[c]) {
            let cols: Vec<usize> = cs.iter().map(|&c| colmap[c]).collect();
            dlx.add_row(rows.len(), &cols);
            rows.push(b);
        }
    }
    let mut picked = Vec::new();
    if !dlx.solve(&mut picked) {
        return Ok(None);
    }
    let mut out: Vec<Word> = seed.to_vec();
    out.extend(picked.into_iter().map(|r| Word::from_raw(rows[r], 12)));
    out.sort();
    Ok(Some(out))
}

/// True iff `s` is contained in some S(5,6,12).
pub fn is_sub_witt(s: &[Word]) -> Result<bool> {
    Ok(witt_completion(s)?.is_some())
}

/// Every `(k-1)`-subset of the `n` points lies in exactly one block.
pub fn is_steiner_system(blocks: &[Word], n: usize, k: usize) -> bool {
    if k == 0 || blocks.iter().any(|b| b.len() != n || b.weight() != k) {
        return false;
    }
    let mut hits = vec![0u8; 1 << n];
    for b in blocks {
        let bits = b.bits();
        let mut rest = bits;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest ^= bit;
            hits[(bits ^ bit) as usize] += 1;
        }
    }
    let full = full_mask(n);
    (0..=full).filter(|x| x.count_ones() as usize == k - 1).all(|x| hits[x as usize] == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_words;

    #[test]
    fn dual_of_even_code() {
        let s = parse_words("0000 1100 0011 1111").unwrap();
        let d = dual_space(&s).unwrap();
        assert_eq!(d.members.len(), 4);
        assert_eq!(d.standard_basis, parse_words("1100 0011").unwrap());
        assert!(d.is_product_closed() && d.basis_spans());
    }

    #[test]
    fn affine_rank_small() {
        assert_eq!(affine_rank(&parse_words("0101").unwrap()).unwrap(), 0);
        assert_eq!(affine_rank(&parse_words("1000 0100 0010").unwrap()).unwrap(), 2);
    }

    #[test]
    fn witt_design_is_steiner() {
        let w = witt_design();
        assert!(is_steiner_system(&w, 12, 6));
        assert!(is_sub_witt(&w[..40]).unwrap());
    }

    #[test]
    fn empty_seed_completes() {
        let w = witt_completion(&[]).unwrap().unwrap();
        assert_eq!(w.len(), 132);
        assert!(is_steiner_system(&w, 12, 6));
    }

    #[test]
    fn overlapping_seed_fails() {
        let s = parse_words("111111000000 111110100000").unwrap();
        assert!(!is_sub_witt(&s).unwrap());
    }
}
