//! Extending a trade `(T0, T1)` to 3-way trades `(T0, T1, T2)`.

use crate::error::Result;
use crate::trade::{KWayTrade, Trade, TradeKind};
use crate::word::{full_mask, Word};

struct MateSearch {
    n: usize,
    full: u32,
    pairs: Vec<u32>,
    t0: Vec<u32>,
    t1: Vec<u32>,
    /// Words outside `T0 ∪ T1` with exactly `n/2` neighbours in each part.
    cand: Vec<bool>,
    in2: Vec<bool>,
    blocked: Vec<u16>,
    t2: Vec<u32>,
    found: Vec<Vec<u32>>,
}

impl MateSearch {
    fn ok(&self, w: u32) -> bool {
        self.cand[w as usize] && !self.in2[w as usize] && self.blocked[w as usize] == 0
    }

    fn can_add(&self, w: u32) -> bool {
        self.ok(w) && self.ok(w ^ self.full)
    }

    fn push(&mut self, w: u32) {
        self.in2[w as usize] = true;
        self.t2.push(w);
        self.blocked[w as usize] += 1;
        for i in 0..self.pairs.len() {
            self.blocked[(w ^ self.pairs[i]) as usize] += 1;
        }
    }

    fn pop(&mut self) {
        let w = self.t2.pop().expect("nonempty");
        self.in2[w as usize] = false;
        self.blocked[w as usize] -= 1;
        for i in 0..self.pairs.len() {
            self.blocked[(w ^ self.pairs[i]) as usize] -= 1;
        }
    }

    fn free(&self, v: u32) -> u32 {
        let mut matched = 0;
        for &m in &self.pairs {
            if self.in2[(v ^ m) as usize] {
                matched |= m;
            }
        }
        self.full & !matched
    }

    fn partners(&self, v: u32, a: usize, free: u32) -> u32 {
        let mut out = 0;
        let mut rest = free & !(1 << a);
        while rest != 0 {
            let b = rest.trailing_zeros();
            rest &= rest - 1;
            if self.can_add(v ^ (1 << a) ^ (1 << b)) {
                out |= 1 << b;
            }
        }
        out
    }

    fn tightest(&self, v: u32, free: u32) -> Option<(usize, u32)> {
        let mut best = None;
        let mut count = u32::MAX;
        let mut rest = free;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let ps = self.partners(v, a, free);
            if ps == 0 {
                return None;
            }
            if ps.count_ones() < count {
                count = ps.count_ones();
                best = Some((a, ps));
            }
        }
        best
    }

    fn run(&mut self) {
        // most constrained unresolved word of T0
        let mut pick: Option<(u32, u32, u32)> = None;
        for &v in &self.t0 {
            let free = self.free(v);
            if free == 0 {
                continue;
            }
            let Some((_, ps)) = self.tightest(v, free) else {
                return;
            };
            let c = ps.count_ones();
            if pick.is_none_or(|p| c < p.0) {
                pick = Some((c, v, free));
            }
        }
        match pick {
            None => {
                let h = self.n / 2;
                let t1_ok = self.t1.iter().all(|&u| self.pairs.iter().filter(|&&m| self.in2[(u ^ m) as usize]).count() == h);
                if t1_ok {
                    let mut t2 = self.t2.clone();
                    t2.sort_unstable();
                    self.found.push(t2);
                }
            }
            Some((_, v, free)) => self.complete(v, free),
        }
    }

    fn complete(&mut self, v: u32, free: u32) {
        if free == 0 {
            self.run();
            return;
        }
        let Some((a, mut ps)) = self.tightest(v, free) else {
            return;
        };
        while ps != 0 {
            let b = ps.trailing_zeros() as usize;
            ps &= ps - 1;
            let w = v ^ (1 << a) ^ (1 << b);
            if self.can_add(w) {
                self.push(w);
                self.push(w ^ self.full);
                self.complete(v, free & !((1 << a) | (1 << b)));
                self.pop();
                self.pop();
            }
        }
    }
}

/// All sets `T2` disjoint from `T0 ∪ T1` such that `(T0, T2)` and
/// `(T1, T2)` are extended 1-perfect trades, in ascending order.
pub fn find_third_mate(t: &Trade) -> Result<Vec<Vec<Word>>> {
    let n = t.n();
    let full = full_mask(n);
    let t0 = t.t0_bits();
    let t1 = t.t1_bits();
    let to_words = |v: &[u32]| v.iter().map(|&b| Word::from_raw(b, n)).collect::<Vec<_>>();
    if n % 4 == 2 {
        // the complement rule forces T2 = complement of T0, which is T1
        let mut t2: Vec<u32> = t0.iter().map(|&w| w ^ full).collect();
        t2.sort_unstable();
        let disjoint = !t2.iter().any(|w| t0.contains(w) || t1.contains(w));
        if disjoint
            && Trade::extended_from_bits(n, &t0, &t2)?.is_valid()
            && Trade::extended_from_bits(n, &t1, &t2)?.is_valid()
        {
            return Ok(vec![to_words(&t2)]);
        }
        return Ok(Vec::new());
    }
    let size = 1usize << n;
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            pairs.push((1u32 << a) | (1u32 << b));
        }
    }
    let mut deg = [vec![0u16; size], vec![0u16; size]];
    for (p, part) in [&t0, &t1].into_iter().enumerate() {
        for &w in part {
            for &m in &pairs {
                deg[p][(w ^ m) as usize] += 1;
            }
        }
    }
    let mut occupied = vec![false; size];
    for &w in t0.iter().chain(&t1) {
        occupied[w as usize] = true;
    }
    let h = (n / 2) as u16;
    let cand: Vec<bool> = (0..size).map(|w| !occupied[w] && deg[0][w] == h && deg[1][w] == h).collect();
    let mut s = MateSearch {
        n,
        full,
        pairs,
        t0,
        t1,
        cand,
        in2: vec![false; size],
        blocked: vec![0; size],
        t2: Vec::new(),
        found: Vec::new(),
    };
    s.run();
    let mut found = s.found;
    found.sort();
    found.dedup();
    let mut out = Vec::new();
    for t2 in found {
        if Trade::extended_from_bits(n, &s.t0, &t2)?.is_valid() && Trade::extended_from_bits(n, &s.t1, &t2)?.is_valid() {
            out.push(to_words(&t2));
        }
    }
    Ok(out)
}

/// The 3-way trades obtained from the third mates of `t`.
pub fn third_mate_kway(t: &Trade) -> Result<Vec<KWayTrade>> {
    find_third_mate(t)?
        .into_iter()
        .map(|t2| KWayTrade::new(TradeKind::Extended1Perfect, vec![t.t0().to_vec(), t.t1().to_vec(), t2]))
        .collect()
}
