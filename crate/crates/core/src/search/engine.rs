//! Depth-first neighbourhood completion.
//!
//! Every word of a partial trade is either resolved (its `n/2` neighbours
//! in the opposite part are all present) or on a frontier. Expanding a
//! frontier word `v` chooses the rest of its opposite-part neighbourhood,
//! which is a perfect matching of the coordinates (in constant-weight mode a
//! bijection between the ones and the zeros of `v`). Words within a part
//! never lie at distance 2, so a resolved word can never gain a further
//! neighbour. Each new word brings its complement along: into the opposite
//! part when `n ≡ 2 (mod 4)`, into the same part when `n ≡ 0 (mod 4)`. The
//! complement's neighbourhood is the complement of the new word's, so only
//! the new word joins the frontier.

use crate::word::full_mask;

use super::PartialState;

/// Static search parameters.
pub(crate) struct Rules {
    pub n: usize,
    pub constant_weight: bool,
    /// Membership table for the words allowed in `T0`.
    pub allowed_t0: Option<Vec<bool>>,
    pub pairs: Vec<u32>,
    pub full: u32,
}

impl Rules {
    pub fn new(n: usize, constant_weight: bool, allowed_t0: Option<Vec<bool>>) -> Self {
        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        for a in 0..n {
            for b in (a + 1)..n {
                pairs.push((1u32 << a) | (1u32 << b));
            }
        }
        Rules { n, constant_weight, allowed_t0, pairs, full: full_mask(n) }
    }

    /// Part receiving the complement of a word added to part `p`.
    #[inline]
    pub fn complement_part(&self, p: usize) -> usize {
        if self.n % 4 == 2 {
            1 - p
        } else {
            p
        }
    }
}

pub(crate) enum Event<'a> {
    Solution(&'a Engine<'a>),
    Partial(&'a Engine<'a>),
}

struct LogEntry {
    part: u8,
    word: u32,
    frontier: bool,
}

pub(crate) struct Engine<'r> {
    pub rules: &'r Rules,
    /// 0 = absent, 1 = in T0, 2 = in T1.
    member: Vec<u8>,
    /// Number of words of part `j` at distance 0 or 2.
    blocked: [Vec<u16>; 2],
    pub parts: [Vec<u32>; 2],
    pub frontier: [Vec<u32>; 2],
    log: Vec<LogEntry>,
    pub nodes: u64,
}

impl<'r> Engine<'r> {
    fn empty(rules: &'r Rules) -> Self {
        let size = 1usize << rules.n;
        Engine {
            rules,
            member: vec![0; size],
            blocked: [vec![0; size], vec![0; size]],
            parts: [Vec::new(), Vec::new()],
            frontier: [Vec::new(), Vec::new()],
            log: Vec::new(),
            nodes: 0,
        }
    }

    /// Loads a partial state; `None` if it violates the independence rules.
    pub fn from_state(rules: &'r Rules, s: &PartialState) -> Option<Self> {
        let mut e = Engine::empty(rules);
        for (p, part) in [&s.t0, &s.t1].into_iter().enumerate() {
            for &w in part {
                if !e.fits(p, w) {
                    return None;
                }
                e.insert(p, w, false);
            }
        }
        e.frontier = [s.frontier0.clone(), s.frontier1.clone()];
        e.log.clear();
        Some(e)
    }

    pub fn snapshot(&self, multiplicity: u64) -> PartialState {
        let sorted = |v: &[u32]| {
            let mut v = v.to_vec();
            v.sort_unstable();
            v
        };
        PartialState {
            n: self.rules.n,
            t0: sorted(&self.parts[0]),
            t1: sorted(&self.parts[1]),
            frontier0: sorted(&self.frontier[0]),
            frontier1: sorted(&self.frontier[1]),
            multiplicity,
        }
    }

    #[inline]
    fn fits(&self, p: usize, w: u32) -> bool {
        self.member[w as usize] == 0
            && self.blocked[p][w as usize] == 0
            && (p == 1 || self.rules.allowed_t0.as_ref().is_none_or(|a| a[w as usize]))
    }

    /// Whether `w` and its complement can join part `p`.
    #[inline]
    fn can_add(&self, p: usize, w: u32) -> bool {
        self.fits(p, w) && self.fits(self.rules.complement_part(p), w ^ self.rules.full)
    }

    fn insert(&mut self, p: usize, w: u32, frontier: bool) {
        self.member[w as usize] = p as u8 + 1;
        self.parts[p].push(w);
        let b = &mut self.blocked[p];
        b[w as usize] += 1;
        for &m in &self.rules.pairs {
            b[(w ^ m) as usize] += 1;
        }
        if frontier {
            self.frontier[p].push(w);
        }
        self.log.push(LogEntry { part: p as u8, word: w, frontier });
    }

    /// Adds `w` to part `p` with its complement, or nothing if either is blocked.
    fn add(&mut self, p: usize, w: u32) -> bool {
        if !self.can_add(p, w) {
            return false;
        }
        self.insert(p, w, true);
        self.insert(self.rules.complement_part(p), w ^ self.rules.full, false);
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.log.len() > mark {
            let e = self.log.pop().unwrap();
            let p = e.part as usize;
            self.member[e.word as usize] = 0;
            let last = self.parts[p].pop();
            debug_assert_eq!(last, Some(e.word));
            let b = &mut self.blocked[p];
            b[e.word as usize] -= 1;
            for &m in &self.rules.pairs {
                b[(e.word ^ m) as usize] -= 1;
            }
            if e.frontier {
                let f = self.frontier[p].pop();
                debug_assert_eq!(f, Some(e.word));
            }
        }
    }

    /// Coordinates of `v` not yet covered by its opposite-part neighbours.
    #[inline]
    fn free_coords(&self, v: u32, opposite: usize) -> u32 {
        let tag = opposite as u8 + 1;
        let mut matched = 0u32;
        for &m in &self.rules.pairs {
            if self.member[(v ^ m) as usize] == tag {
                matched |= m;
            }
        }
        self.rules.full & !matched
    }

    #[inline]
    fn partner_ok(&self, v: u32, a: usize, b: usize) -> bool {
        !self.rules.constant_weight || ((v >> a) ^ (v >> b)) & 1 == 1
    }

    /// Valid partners of coordinate `a` among `free`, as a mask.
    #[inline]
    fn partners(&self, v: u32, opposite: usize, a: usize, free: u32) -> u32 {
        let mut out = 0u32;
        let mut rest = free & !(1 << a);
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.partner_ok(v, a, b) && self.can_add(opposite, v ^ (1 << a) ^ (1 << b)) {
                out |= 1 << b;
            }
        }
        out
    }

    /// The free coordinate with fewest partners and that count; `None` if
    /// some free coordinate has none.
    fn tightest(&self, v: u32, opposite: usize, free: u32) -> Option<(usize, u32)> {
        let mut best: Option<(usize, u32)> = None;
        let mut best_count = u32::MAX;
        let mut rest = free;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let ps = self.partners(v, opposite, a, free);
            let c = ps.count_ones();
            if c == 0 {
                return None;
            }
            if c < best_count {
                best_count = c;
                best = Some((a, ps));
                if c == 1 {
                    break;
                }
            }
        }
        best
    }

    /// Most constrained frontier word: `(part, index, free coords)`.
    /// `Err(())` signals a dead state.
    fn select(&self) -> Result<Option<(usize, usize, u32)>, ()> {
        let mut best: Option<(u32, u32, usize, u32, usize, u32)> = None;
        for p in 0..2 {
            for (i, &v) in self.frontier[p].iter().enumerate() {
                let free = self.free_coords(v, 1 - p);
                let score = if free == 0 {
                    0
                } else {
                    match self.tightest(v, 1 - p, free) {
                        None => return Err(()),
                        Some((_, ps)) => ps.count_ones(),
                    }
                };
                let key = (score, free.count_ones(), p, v);
                let better = match &best {
                    None => true,
                    Some(b) => key < (b.0, b.1, b.2, b.3),
                };
                if better {
                    best = Some((score, free.count_ones(), p, v, i, free));
                }
                if score <= 1 {
                    let b = best.unwrap();
                    return Ok(Some((b.2, b.4, b.5)));
                }
            }
        }
        Ok(best.map(|b| (b.2, b.4, b.5)))
    }

    /// Runs the search, reporting completed trades and, when `budget`
    /// expansions have been spent, the partial states reached.
    pub fn run(&mut self, budget: Option<usize>, sink: &mut dyn FnMut(Event<'_>)) {
        self.nodes += 1;
        if self.frontier[0].is_empty() && self.frontier[1].is_empty() {
            sink(Event::Solution(self));
            return;
        }
        if budget == Some(0) {
            sink(Event::Partial(self));
            return;
        }
        let Ok(Some((p, i, free))) = self.select() else {
            return;
        };
        let v = self.frontier[p].swap_remove(i);
        self.complete(v, p, free, budget.map(|b| b - 1), sink);
        self.frontier[p].push(v);
        let last = self.frontier[p].len() - 1;
        self.frontier[p].swap(i, last);
    }

    fn complete(&mut self, v: u32, p: usize, free: u32, budget: Option<usize>, sink: &mut dyn FnMut(Event<'_>)) {
        if free == 0 {
            self.run(budget, sink);
            return;
        }
        let o = 1 - p;
        let Some((a, mut ps)) = self.tightest(v, o, free) else {
            return;
        };
        while ps != 0 {
            let b = ps.trailing_zeros() as usize;
            ps &= ps - 1;
            let mark = self.log.len();
            if self.add(o, v ^ (1 << a) ^ (1 << b)) {
                self.complete(v, p, free & !((1 << a) | (1 << b)), budget, sink);
            }
            self.undo(mark);
        }
    }
}
