//! Binary words of length at most 16, coordinate permutations and the
//! automorphisms of the hypercube-derived graphs built on them.
//!
//! Coordinate `i` is bit `i` of the mask and the `i`-th character of the
//! text form, counting from the left.

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, TradeError};

pub const MAX_LEN: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    bits: u16,
    n: u8,
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl Word {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_LEN {
            return Err(TradeError::InvalidLength(n));
        }
        if bits & !full_mask(n) != 0 {
            return Err(TradeError::ParseWord(format!("{bits:#x} has bits beyond length {n}")));
        }
        Ok(Word { bits: bits as u16, n: n as u8 })
    }

    /// Caller guarantees `bits < 2^n` and `1 <= n <= 16`.
    #[inline]
    pub(crate) fn from_raw(bits: u32, n: usize) -> Self {
        debug_assert!((1..=MAX_LEN).contains(&n) && bits & !full_mask(n) == 0);
        Word { bits: bits as u16, n: n as u8 }
    }

    pub fn zero(n: usize) -> Result<Self> {
        Word::new(0, n)
    }

    pub fn ones(n: usize) -> Result<Self> {
        Word::new(full_mask(n), n)
    }

    /// Word with ones exactly at the listed coordinates.
    pub fn from_support(support: &[usize], n: usize) -> Result<Self> {
        let mut bits = 0u32;
        for &c in support {
            if c >= n {
                return Err(TradeError::CoordinateOutOfRange { coord: c, n });
            }
            bits |= 1 << c;
        }
        Word::new(bits, n)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits as u32
    }

    #[inline]
    pub fn len(self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(self, coord: usize) -> bool {
        coord < self.len() && (self.bits >> coord) & 1 == 1
    }

    #[inline]
    pub fn weight(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn support(self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.get(i)).collect()
    }

    pub fn hamming_distance(self, other: Word) -> Result<usize> {
        if self.n != other.n {
            return Err(TradeError::LengthMismatch(self.len(), other.len()));
        }
        Ok((self.bits ^ other.bits).count_ones() as usize)
    }

    #[inline]
    pub fn complement(self) -> Word {
        Word::from_raw(!self.bits() & full_mask(self.len()), self.len())
    }

    /// Bitwise sum over GF(2).
    pub fn xor(self, other: Word) -> Result<Word> {
        if self.n != other.n {
            return Err(TradeError::LengthMismatch(self.len(), other.len()));
        }
        Ok(Word::from_raw(self.bits() ^ other.bits(), self.len()))
    }

    /// Inner product over GF(2).
    pub fn dot(self, other: Word) -> bool {
        (self.bits & other.bits).count_ones() & 1 == 1
    }

    /// Coordinate-wise product.
    pub fn and(self, other: Word) -> Word {
        Word::from_raw(self.bits() & other.bits(), self.len())
    }

    /// All words at Hamming distance exactly two, ascending by mask.
    pub fn halved_neighbors(self) -> Vec<Word> {
        let n = self.len();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(Word::from_raw(self.bits() ^ (1 << i) ^ (1 << j), n));
            }
        }
        out.sort_unstable();
        out
    }

    /// Same-weight words at Hamming distance two (one 1 swapped with one 0), ascending.
    pub fn johnson_neighbors(self) -> Vec<Word> {
        let n = self.len();
        let mut out = Vec::with_capacity(self.weight() * (n - self.weight()));
        for i in 0..n {
            if !self.get(i) {
                continue;
            }
            for j in 0..n {
                if self.get(j) {
                    continue;
                }
                out.push(Word::from_raw(self.bits() ^ (1 << i) ^ (1 << j), n));
            }
        }
        out.sort_unstable();
        out
    }

    /// Words at Hamming distance at most one, ascending.
    pub fn ball(self) -> Vec<Word> {
        let n = self.len();
        let mut out: Vec<Word> = (0..n).map(|i| Word::from_raw(self.bits() ^ (1 << i), n)).collect();
        out.push(self);
        out.sort_unstable();
        out
    }

    /// Key realizing the left-to-right string order (coordinate 0 most significant).
    #[inline]
    pub fn lex_key(self) -> u32 {
        (self.bits().reverse_bits()) >> (32 - self.len())
    }

    /// Appends one coordinate at position `n`.
    pub fn append(self, bit: bool) -> Result<Word> {
        Word::new(self.bits() | ((bit as u32) << self.len()), self.len() + 1)
    }

    /// Concatenation `self || other`.
    pub fn concat(self, other: Word) -> Result<Word> {
        let n = self.len() + other.len();
        if n > MAX_LEN {
            return Err(TradeError::InvalidLength(n));
        }
        Word::new(self.bits() | (other.bits() << self.len()), n)
    }

    /// Removes coordinate `coord`, shifting the later ones left.
    pub fn delete(self, coord: usize) -> Result<Word> {
        let n = self.len();
        if coord >= n {
            return Err(TradeError::CoordinateOutOfRange { coord, n });
        }
        if n == 1 {
            return Err(TradeError::InvalidLength(0));
        }
        let low = self.bits() & ((1 << coord) - 1);
        let high = (self.bits() >> (coord + 1)) << coord;
        Ok(Word::from_raw(low | high, n - 1))
    }

    pub fn parse(s: &str) -> Result<Word> {
        let mut bits = 0u32;
        let mut n = 0usize;
        for ch in s.chars() {
            match ch {
                '0' | '1' => {
                    if n >= MAX_LEN {
                        return Err(TradeError::ParseWord(s.to_string()));
                    }
                    if ch == '1' {
                        bits |= 1 << n;
                    }
                    n += 1;
                }
                c if c.is_whitespace() => {}
                _ => return Err(TradeError::ParseWord(s.to_string())),
            }
        }
        if n == 0 {
            return Err(TradeError::ParseWord(s.to_string()));
        }
        Word::new(bits, n)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len()).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = TradeError;
    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

/// `image[i]` is the coordinate that coordinate `i` is sent to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordPermutation {
    image: [u8; MAX_LEN],
    n: u8,
}

impl CoordPermutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_LEN);
        let mut image = [0u8; MAX_LEN];
        for (i, slot) in image.iter_mut().enumerate() {
            *slot = i as u8;
        }
        CoordPermutation { image, n: n as u8 }
    }

    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > MAX_LEN {
            return Err(TradeError::InvalidLength(n));
        }
        let mut seen = 0u32;
        let mut image = [0u8; MAX_LEN];
        for (i, &j) in images.iter().enumerate() {
            if j >= n || seen & (1 << j) != 0 {
                return Err(TradeError::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen |= 1 << j;
            image[i] = j as u8;
        }
        for (i, slot) in image.iter_mut().enumerate().skip(n) {
            *slot = i as u8;
        }
        Ok(CoordPermutation { image, n: n as u8 })
    }

    /// Parses cycle notation such as `(0123456789a)(0b)`; digits `a`..`f`
    /// stand for coordinates 10..15. The empty string is the identity.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut seen = 0u32;
        let mut cycle: Vec<usize> = Vec::new();
        let mut open = false;
        for ch in s.chars() {
            match ch {
                '(' if !open => {
                    open = true;
                    cycle.clear();
                }
                ')' if open => {
                    open = false;
                    for k in 0..cycle.len() {
                        image[cycle[k]] = cycle[(k + 1) % cycle.len()];
                    }
                }
                c if c.is_whitespace() => {}
                c if open => {
                    let p = c
                        .to_digit(16)
                        .ok_or_else(|| TradeError::InvalidPermutation(s.to_string()))?
                        as usize;
                    if p >= n || seen & (1 << p) != 0 {
                        return Err(TradeError::InvalidPermutation(s.to_string()));
                    }
                    seen |= 1 << p;
                    cycle.push(p);
                }
                _ => return Err(TradeError::InvalidPermutation(s.to_string())),
            }
        }
        if open {
            return Err(TradeError::InvalidPermutation(s.to_string()));
        }
        CoordPermutation::from_images(&image)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.image[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        (0..self.len()).map(|i| self.image(i)).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.len()).all(|i| self.image(i) == i)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = *self;
        for i in 0..self.len() {
            inv.image[self.image[i] as usize] = i as u8;
        }
        inv
    }

    /// `self.then(other)` applies `self` first.
    pub fn then(&self, other: &CoordPermutation) -> Self {
        let mut out = *self;
        for i in 0..self.len() {
            out.image[i] = other.image[self.image[i] as usize];
        }
        out
    }

    #[inline]
    pub(crate) fn apply_bits(&self, bits: u32) -> u32 {
        let mut out = 0u32;
        let mut b = bits;
        while b != 0 {
            let i = b.trailing_zeros() as usize;
            out |= 1 << self.image[i];
            b &= b - 1;
        }
        out
    }

    pub fn apply(&self, w: Word) -> Word {
        Word::from_raw(self.apply_bits(w.bits()), w.len())
    }

    /// Cycle notation, using hex digits for coordinates.
    pub fn to_cycles(&self) -> String {
        let mut seen = 0u32;
        let mut out = String::new();
        for start in 0..self.len() {
            if seen & (1 << start) != 0 || self.image(start) == start {
                continue;
            }
            out.push('(');
            let mut i = start;
            while seen & (1 << i) == 0 {
                seen |= 1 << i;
                out.push(std::char::from_digit(i as u32, 16).unwrap());
                i = self.image(i);
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for CoordPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoordPermutation{}", self.to_cycles())
    }
}

/// A coordinate permutation followed by a translation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GraphAutomorphism {
    pub perm: CoordPermutation,
    pub translation: Word,
}

impl GraphAutomorphism {
    pub fn new(perm: CoordPermutation, translation: Word) -> Result<Self> {
        if perm.len() != translation.len() {
            return Err(TradeError::LengthMismatch(perm.len(), translation.len()));
        }
        Ok(GraphAutomorphism { perm, translation })
    }

    pub fn identity(n: usize) -> Self {
        GraphAutomorphism {
            perm: CoordPermutation::identity(n),
            translation: Word::from_raw(0, n),
        }
    }

    pub fn translation(t: Word) -> Self {
        GraphAutomorphism {
            perm: CoordPermutation::identity(t.len()),
            translation: t,
        }
    }

    #[inline]
    pub fn apply(&self, w: Word) -> Word {
        Word::from_raw(self.perm.apply_bits(w.bits()) ^ self.translation.bits(), w.len())
    }

    pub fn inverse(&self) -> Self {
        let inv = self.perm.inverse();
        GraphAutomorphism {
            perm: inv,
            translation: inv.apply(self.translation),
        }
    }

    /// `self.then(other)` applies `self` first.
    pub fn then(&self, other: &GraphAutomorphism) -> Self {
        GraphAutomorphism {
            perm: self.perm.then(&other.perm),
            translation: other.apply(self.translation),
        }
    }

    /// Valid for the halved cube: the translation has even weight.
    pub fn is_halved_cube_automorphism(&self) -> bool {
        self.translation.weight() % 2 == 0
    }

    /// Valid for J(n, w): no translation, or the all-one word when n = 2w.
    pub fn is_johnson_automorphism(&self, weight: usize) -> bool {
        let t = self.translation;
        t.weight() == 0 || (t.weight() == t.len() && 2 * weight == t.len())
    }
}

/// Parses a list of words separated by whitespace, commas or semicolons.
pub fn parse_words(s: &str) -> Result<Vec<Word>> {
    s.split([',', ';'])
        .flat_map(|chunk| chunk.split_whitespace())
        .map(Word::parse)
        .collect()
}

/// Sorts ascending and removes duplicates.
pub fn normalize(words: &mut Vec<Word>) {
    words.sort_unstable();
    words.dedup();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(w("0000000000").weight(), 0);
        assert_eq!(w("0101010101").weight(), 5);
        assert_eq!(w("000001011111").weight(), 6);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(w("000000").hamming_distance(w("111100")).unwrap(), 4);
        let x = w("0110100101");
        assert_eq!(x.hamming_distance(x).unwrap(), 0);
        let n = 9;
        assert_eq!(Word::zero(n).unwrap().hamming_distance(Word::ones(n).unwrap()).unwrap(), n);
        assert!(w("00").hamming_distance(w("000")).is_err());
    }

    #[test]
    fn length6_words_pairwise_far() {
        let t0 = parse_words("000000 111100 110011 001111").unwrap();
        for a in &t0 {
            for b in &t0 {
                if a != b {
                    assert!(a.hamming_distance(*b).unwrap() >= 4);
                }
            }
        }
    }

    #[test]
    fn complement_examples() {
        assert_eq!(w("0000001111").complement(), w("1111110000"));
        assert_eq!(w("000000111111").complement(), w("111111000000"));
        let x = w("0110111");
        assert_eq!(x.complement().complement(), x);
    }

    #[test]
    fn text_form_is_left_to_right() {
        let x = w("1000 0000 01");
        assert_eq!(x.len(), 10);
        assert!(x.get(0));
        assert!(x.get(9));
        assert_eq!(x.bits(), 1 | (1 << 9));
        assert_eq!(x.to_string(), "1000000001");
        assert!(Word::parse("0120").is_err());
        assert!(Word::parse("").is_err());
    }

    #[test]
    fn halved_neighbors_n4() {
        let got: Vec<String> = w("0000").halved_neighbors().iter().map(|x| x.to_string()).collect();
        // ascending by mask: 1100 (3), 1010 (5), 0110 (6), 1001 (9), 0101 (10), 0011 (12)
        assert_eq!(got, vec!["1100", "1010", "0110", "1001", "0101", "0011"]);
        assert_eq!(w("0110100101").halved_neighbors().len(), 45);
    }

    #[test]
    fn halved_neighbors_match_brute_force() {
        let x = w("111100");
        let brute: Vec<Word> = (0..64u32)
            .map(|b| Word::new(b, 6).unwrap())
            .filter(|y| x.hamming_distance(*y).unwrap() == 2)
            .collect();
        let got = x.halved_neighbors();
        assert_eq!(got, brute);
        assert!(!got.contains(&w("000000")));
        assert!(got.contains(&w("110000")));
        assert!(got.contains(&w("111111")));
        assert!(got.iter().all(|y| y.weight() % 2 == 0));
    }

    #[test]
    fn johnson_neighbors_examples() {
        let x = w("000000111111");
        let got = x.johnson_neighbors();
        assert_eq!(got.len(), 36);
        let brute: Vec<Word> = (0..4096u32)
            .map(|b| Word::new(b, 12).unwrap())
            .filter(|y| y.weight() == 6 && x.hamming_distance(*y).unwrap() == 2)
            .collect();
        assert_eq!(got, brute);
        assert!(got.contains(&w("000001111110")));
        assert!(!got.contains(&x));
    }

    #[test]
    fn johnson_neighbors_across_boundary() {
        let x = w("000111");
        for y in x.johnson_neighbors() {
            let diff = x.xor(y).unwrap();
            assert_eq!(diff.weight(), 2);
            assert_eq!((diff.bits() & 0b000111).count_ones(), 1);
        }
    }

    #[test]
    fn automorphism_group_law() {
        let n = 8;
        let p = CoordPermutation::parse_cycles("(0123)(56)", n).unwrap();
        let g = GraphAutomorphism::new(p, w("11000011")).unwrap();
        let x = w("10110100");
        assert_eq!(g.apply(g.inverse().apply(x)), x);
        assert_eq!(g.inverse().apply(g.apply(x)), x);
        assert_eq!(GraphAutomorphism::identity(n).apply(x), x);
        assert_eq!(GraphAutomorphism::translation(x).apply(x), Word::zero(n).unwrap());
        let h = GraphAutomorphism::new(CoordPermutation::parse_cycles("(07)", n).unwrap(), w("00000011")).unwrap();
        assert_eq!(g.then(&h).apply(x), h.apply(g.apply(x)));
    }

    #[test]
    fn cycle_notation_roundtrip() {
        let p = CoordPermutation::parse_cycles("(0123456789a)", 12).unwrap();
        assert_eq!(p.image(10), 0);
        assert_eq!(p.image(11), 11);
        assert_eq!(p.to_cycles(), "(0123456789a)");
        let q = CoordPermutation::parse_cycles("(0b)(1a)(25)(37)(48)(69)", 12).unwrap();
        assert_eq!(q.then(&q), CoordPermutation::identity(12));
        assert!(CoordPermutation::parse_cycles("(011)", 12).is_err());
        assert!(CoordPermutation::parse_cycles("(0c)", 12).is_err());
    }

    #[test]
    fn delete_and_append() {
        let x = w("1011001");
        assert_eq!(x.delete(0).unwrap(), w("011001"));
        assert_eq!(x.delete(6).unwrap(), w("101100"));
        assert_eq!(x.delete(2).unwrap(), w("101001"));
        assert_eq!(w("101").append(true).unwrap(), w("1011"));
        assert_eq!(w("10").concat(w("011")).unwrap(), w("10011"));
    }

    #[test]
    fn lex_key_orders_like_strings() {
        let mut v = parse_words("0101 1000 0011 0100").unwrap();
        v.sort_by_key(|x| x.lex_key());
        let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, vec!["0011", "0100", "0101", "1000"]);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn word(n: usize) -> impl Strategy<Value = Word> {
            (0u32..(1 << n)).prop_map(move |b| Word::new(b, n).unwrap())
        }

        fn perm(n: usize) -> impl Strategy<Value = CoordPermutation> {
            Just((0..n).collect::<Vec<usize>>())
                .prop_shuffle()
                .prop_map(|v| CoordPermutation::from_images(&v).unwrap())
        }

        proptest! {
            #[test]
            fn distance_is_weight_of_sum(x in word(12), y in word(12)) {
                prop_assert_eq!(x.hamming_distance(y).unwrap(), x.xor(y).unwrap().weight());
            }

            #[test]
            fn automorphisms_preserve_distance(x in word(10), y in word(10), p in perm(10), t in word(10)) {
                let g = GraphAutomorphism::new(p, t).unwrap();
                prop_assert_eq!(
                    g.apply(x).hamming_distance(g.apply(y)).unwrap(),
                    x.hamming_distance(y).unwrap()
                );
            }

            #[test]
            fn neighbor_parity_and_weight(x in word(11)) {
                for y in x.halved_neighbors() {
                    prop_assert_eq!(y.weight() % 2, x.weight() % 2);
                }
                let js = x.johnson_neighbors();
                prop_assert_eq!(js.len(), x.weight() * (11 - x.weight()));
                for y in js {
                    prop_assert_eq!(y.weight(), x.weight());
                }
            }

            #[test]
            fn text_roundtrip(x in word(13)) {
                prop_assert_eq!(Word::parse(&x.to_string()).unwrap(), x);
            }
        }
    }
}
