//! Individualization-refinement over coordinate permutations.
//!
//! A configuration is an ordered list of word lists ("parts") over `n`
//! coordinates. The search tree branches on ordered partitions of the
//! coordinates; each node is refined by iterated color refinement on the
//! coordinate/word incidence structure. Leaves are labelings, and a
//! configuration's canonical image is the minimum over leaves of
//! `(node-trace sequence, encoded relabeled parts)`.

use std::cmp::Ordering;

use crate::word::MAX_LEN;

pub(crate) type Labeling = [u8; MAX_LEN];

#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy)]
struct Partition {
    cell: [u8; MAX_LEN],
    k: usize,
}

/// A flattened configuration: words tagged with their part index.
pub(crate) struct Config {
    pub n: usize,
    pub words: Vec<u32>,
    pub colors: Vec<u8>,
    pub part_sizes: Vec<usize>,
}

impl Config {
    pub fn new(n: usize, parts: &[Vec<u32>]) -> Self {
        let mut words = Vec::new();
        let mut colors = Vec::new();
        for (c, part) in parts.iter().enumerate() {
            for &w in part {
                words.push(w);
                colors.push(c as u8);
            }
        }
        Config {
            n,
            words,
            colors,
            part_sizes: parts.iter().map(|p| p.len()).collect(),
        }
    }

    fn unit_partition(&self) -> Partition {
        Partition { cell: [0; MAX_LEN], k: 1 }
    }

    /// Refines in place; returns the node invariant.
    fn refine(&self, p: &mut Partition) -> u64 {
        let n = self.n;
        let mut trace = mix(p.k as u64);
        loop {
            let mut masks = [0u32; MAX_LEN];
            for i in 0..n {
                masks[p.cell[i] as usize] |= 1 << i;
            }
            let mut inv = [0u64; MAX_LEN];
            for (&w, &c) in self.words.iter().zip(&self.colors) {
                let mut h = mix(c as u64 + 1);
                for &m in &masks[..p.k] {
                    h = mix(h ^ (w & m).count_ones() as u64);
                }
                let mut b = w;
                while b != 0 {
                    let i = b.trailing_zeros() as usize;
                    inv[i] = inv[i].wrapping_add(h);
                    b &= b - 1;
                }
            }
            let mut order: [u8; MAX_LEN] = [0; MAX_LEN];
            for (i, slot) in order.iter_mut().enumerate().take(n) {
                *slot = i as u8;
            }
            order[..n].sort_unstable_by(|&a, &b| {
                let (a, b) = (a as usize, b as usize);
                p.cell[a].cmp(&p.cell[b]).then(inv[a].cmp(&inv[b]))
            });
            let mut newk = 0usize;
            let mut prev: Option<(u8, u64)> = None;
            let mut h = trace;
            let mut cell = [0u8; MAX_LEN];
            for &i in &order[..n] {
                let key = (p.cell[i as usize], inv[i as usize]);
                if prev != Some(key) {
                    newk += 1;
                    prev = Some(key);
                    h = mix(h ^ key.1 ^ ((newk as u64) << 56));
                }
                cell[i as usize] = (newk - 1) as u8;
            }
            trace = mix(h ^ newk as u64);
            let stable = newk == p.k;
            p.cell = cell;
            p.k = newk;
            if stable {
                return trace;
            }
        }
    }

    fn target_cell(&self, p: &Partition) -> usize {
        let mut sizes = [0u8; MAX_LEN];
        for i in 0..self.n {
            sizes[p.cell[i] as usize] += 1;
        }
        let mut best = usize::MAX;
        let mut best_size = u8::MAX;
        for (c, &s) in sizes.iter().enumerate().take(p.k) {
            if s > 1 && s < best_size {
                best = c;
                best_size = s;
            }
        }
        best
    }

    fn individualize(&self, p: &Partition, x: usize, target: usize) -> Partition {
        let mut q = *p;
        for i in 0..self.n {
            let c = p.cell[i] as usize;
            if c > target || (c == target && i != x) {
                q.cell[i] += 1;
            }
        }
        q.k += 1;
        q
    }

    /// Relabeled, per-part sorted words prefixed with `n` and the sizes of
    /// all parts but the last.
    pub fn encode(&self, lab: &Labeling, out: &mut Vec<u16>) {
        out.clear();
        out.push(self.n as u16);
        let parts = self.part_sizes.len();
        for &s in &self.part_sizes[..parts.saturating_sub(1)] {
            out.push(s as u16);
        }
        let mut start = 0;
        for &s in &self.part_sizes {
            let from = out.len();
            for &w in &self.words[start..start + s] {
                out.push(relabel(w, lab) as u16);
            }
            out[from..].sort_unstable();
            start += s;
        }
    }
}

#[inline]
pub(crate) fn relabel(w: u32, lab: &Labeling) -> u32 {
    let mut out = 0u32;
    let mut b = w;
    while b != 0 {
        let i = b.trailing_zeros() as usize;
        out |= 1 << lab[i];
        b &= b - 1;
    }
    out
}

fn prefix_cmp(cur: &[u64], best: &[u64]) -> Ordering {
    for (a, b) in cur.iter().zip(best) {
        match a.cmp(b) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    if cur.len() <= best.len() {
        Ordering::Equal
    } else {
        Ordering::Greater
    }
}

#[derive(Clone, Debug)]
pub(crate) struct BestLeaf {
    pub traces: Vec<u64>,
    pub encoding: Vec<u16>,
    pub labeling: Labeling,
    pub config: usize,
}

/// Outcome of feeding one configuration to a [`Canonizer`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Feed {
    /// The configuration's minimum equals the running best; the labeling maps it there.
    Equal(Labeling),
    /// The configuration set a new best.
    Better(Labeling),
    /// Strictly worse than the running best.
    Worse,
}

/// Running minimum of canonical images over a sequence of configurations.
#[derive(Default)]
pub(crate) struct Canonizer {
    pub best: Option<BestLeaf>,
    configs_seen: usize,
}

struct Run<'a> {
    cfg: &'a Config,
    best: &'a mut Option<BestLeaf>,
    config_id: usize,
    traces: Vec<u64>,
    path: Vec<u8>,
    auts: Vec<Labeling>,
    scratch: Vec<u16>,
    outcome: Option<Feed>,
    abort: bool,
}

impl<'a> Run<'a> {
    fn cmp_prefix(&self) -> Ordering {
        match self.best.as_ref() {
            None => Ordering::Less,
            Some(b) => prefix_cmp(&self.traces, &b.traces),
        }
    }

    fn node(&mut self, p: Partition) {
        if self.abort {
            return;
        }
        if self.cmp_prefix() == Ordering::Greater {
            return;
        }
        if p.k == self.cfg.n {
            self.leaf(&p);
            return;
        }
        let target = self.cfg.target_cell(&p);
        let members: Vec<usize> = (0..self.cfg.n).filter(|&i| p.cell[i] as usize == target).collect();
        let mut explored: Vec<usize> = Vec::with_capacity(members.len());
        for &x in &members {
            if self.abort {
                return;
            }
            if !explored.is_empty() && self.equivalent_to_explored(x, &explored) {
                continue;
            }
            explored.push(x);
            let mut child = self.cfg.individualize(&p, x, target);
            let t = self.cfg.refine(&mut child);
            self.traces.push(t);
            self.path.push(x as u8);
            self.node(child);
            self.path.pop();
            self.traces.pop();
        }
    }

    fn equivalent_to_explored(&self, x: usize, explored: &[usize]) -> bool {
        if self.auts.is_empty() {
            return false;
        }
        let n = self.cfg.n;
        let mut parent: [u8; MAX_LEN] = [0; MAX_LEN];
        for (i, slot) in parent.iter_mut().enumerate().take(n) {
            *slot = i as u8;
        }
        fn find(parent: &mut [u8; MAX_LEN], mut i: usize) -> usize {
            while parent[i] as usize != i {
                parent[i] = parent[parent[i] as usize];
                i = parent[i] as usize;
            }
            i
        }
        let mut any = false;
        for g in &self.auts {
            if self.path.iter().any(|&q| g[q as usize] != q) {
                continue;
            }
            any = true;
            for i in 0..n {
                let a = find(&mut parent, i);
                let b = find(&mut parent, g[i] as usize);
                if a != b {
                    parent[a.max(b)] = a.min(b) as u8;
                }
            }
        }
        if !any {
            return false;
        }
        let rx = find(&mut parent, x);
        explored.iter().any(|&y| find(&mut parent, y) == rx)
    }

    fn leaf(&mut self, p: &Partition) {
        let lab = p.cell;
        self.cfg.encode(&lab, &mut self.scratch);
        let ord = match self.best.as_ref() {
            None => Ordering::Less,
            Some(b) => self
                .traces
                .cmp(&b.traces)
                .then_with(|| self.scratch.cmp(&b.encoding)),
        };
        match ord {
            Ordering::Less => {
                *self.best = Some(BestLeaf {
                    traces: self.traces.clone(),
                    encoding: self.scratch.clone(),
                    labeling: lab,
                    config: self.config_id,
                });
                self.outcome = Some(Feed::Better(lab));
            }
            Ordering::Equal => self.on_equal(lab),
            Ordering::Greater => {
                if let Some(b) = self.best.as_ref() {
                    if self.scratch == b.encoding {
                        self.on_equal(lab);
                    }
                }
            }
        }
    }

    fn on_equal(&mut self, lab: Labeling) {
        let b = self.best.as_ref().expect("best exists");
        if b.config != self.config_id {
            // isomorphic to an earlier configuration: its whole tree has the same minimum
            self.outcome = Some(Feed::Equal(lab));
            self.abort = true;
            return;
        }
        // lab(X) = best(X): best^{-1} o lab is an automorphism
        let n = self.cfg.n;
        let mut inv = [0u8; MAX_LEN];
        for i in 0..n {
            inv[b.labeling[i] as usize] = i as u8;
        }
        let mut g = [0u8; MAX_LEN];
        for i in 0..n {
            g[i] = inv[lab[i] as usize];
        }
        if (0..n).any(|i| g[i] as usize != i) {
            self.auts.push(g);
        }
    }
}

impl Canonizer {
    pub fn new() -> Self {
        Canonizer::default()
    }

    pub fn feed(&mut self, cfg: &Config) -> Feed {
        let config_id = self.configs_seen;
        self.configs_seen += 1;
        let mut p = cfg.unit_partition();
        let t = cfg.refine(&mut p);
        let mut run = Run {
            cfg,
            best: &mut self.best,
            config_id,
            traces: vec![t],
            path: Vec::new(),
            auts: Vec::new(),
            scratch: Vec::with_capacity(cfg.words.len() + 4),
            outcome: None,
            abort: false,
        };
        run.node(p);
        match run.outcome {
            Some(Feed::Better(_)) => {
                let b = self.best.as_ref().expect("best set");
                Feed::Better(b.labeling)
            }
            Some(o) => o,
            None => Feed::Worse,
        }
    }

    pub fn encoding(&self) -> Option<&[u16]> {
        self.best.as_ref().map(|b| b.encoding.as_slice())
    }
}

/// Every coordinate permutation mapping each part of `cfg` onto itself,
/// found by exhausting the refinement tree (pruned only by node invariants).
pub(crate) fn automorphisms(cfg: &Config) -> Vec<Labeling> {
    let n = cfg.n;
    let mut p = cfg.unit_partition();
    let t0 = cfg.refine(&mut p);
    // first path
    let mut first_traces = vec![t0];
    let mut q = p;
    while q.k < n {
        let target = cfg.target_cell(&q);
        let x = (0..n).find(|&i| q.cell[i] as usize == target).unwrap();
        q = cfg.individualize(&q, x, target);
        first_traces.push(cfg.refine(&mut q));
    }
    let first_lab = q.cell;
    let mut first_enc = Vec::new();
    cfg.encode(&first_lab, &mut first_enc);
    let mut inv = [0u8; MAX_LEN];
    for i in 0..n {
        inv[first_lab[i] as usize] = i as u8;
    }

    struct Enumerate<'a> {
        cfg: &'a Config,
        first_traces: Vec<u64>,
        first_enc: Vec<u16>,
        inv: Labeling,
        out: Vec<Labeling>,
        scratch: Vec<u16>,
    }
    impl Enumerate<'_> {
        fn node(&mut self, p: Partition, depth: usize) {
            let n = self.cfg.n;
            if p.k == n {
                if depth + 1 != self.first_traces.len() {
                    return;
                }
                self.cfg.encode(&p.cell, &mut self.scratch);
                if self.scratch == self.first_enc {
                    let mut g = [0u8; MAX_LEN];
                    for i in 0..n {
                        g[i] = self.inv[p.cell[i] as usize];
                    }
                    self.out.push(g);
                }
                return;
            }
            if depth + 1 >= self.first_traces.len() {
                return;
            }
            let target = self.cfg.target_cell(&p);
            for x in 0..n {
                if p.cell[x] as usize != target {
                    continue;
                }
                let mut child = self.cfg.individualize(&p, x, target);
                let t = self.cfg.refine(&mut child);
                if t != self.first_traces[depth + 1] {
                    continue;
                }
                self.node(child, depth + 1);
            }
        }
    }
    let mut e = Enumerate {
        cfg,
        first_traces,
        first_enc,
        inv,
        out: Vec::new(),
        scratch: Vec::new(),
    };
    e.node(p, 0);
    e.out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, parts: &[&[u32]]) -> Config {
        let parts: Vec<Vec<u32>> = parts.iter().map(|p| p.to_vec()).collect();
        Config::new(n, &parts)
    }

    fn permute(n: usize, parts: &[&[u32]], perm: &[usize]) -> Vec<Vec<u32>> {
        let mut lab = [0u8; MAX_LEN];
        for i in 0..n {
            lab[i] = perm[i] as u8;
        }
        parts.iter().map(|p| p.iter().map(|&w| relabel(w, &lab)).collect()).collect()
    }

    fn canon(n: usize, parts: &[Vec<u32>]) -> Vec<u16> {
        let mut c = Canonizer::new();
        c.feed(&Config::new(n, parts));
        c.encoding().unwrap().to_vec()
    }

    #[test]
    fn canonical_image_invariant_under_relabeling() {
        let parts: [&[u32]; 2] = [&[0b000111, 0b111000, 0b101010], &[0b010101, 0b110011]];
        let base = canon(6, &[parts[0].to_vec(), parts[1].to_vec()]);
        for perm in [[5, 4, 3, 2, 1, 0], [1, 0, 3, 2, 5, 4], [2, 0, 1, 5, 3, 4]] {
            assert_eq!(canon(6, &permute(6, &parts, &perm)), base);
        }
    }

    #[test]
    fn automorphism_count_of_cube_faces() {
        // all weight-2 words of length 4: full symmetric group
        let words: Vec<u32> = (0u32..16).filter(|w| w.count_ones() == 2).collect();
        let auts = automorphisms(&cfg(4, &[&words]));
        assert_eq!(auts.len(), 24);
        // a single word of weight 2 in length 5: 2! * 3!
        let auts = automorphisms(&cfg(5, &[&[0b00011]]));
        assert_eq!(auts.len(), 12);
    }

    #[test]
    fn distinct_structures_get_distinct_images() {
        let a = canon(6, &[vec![0b000011, 0b001100]]);
        let b = canon(6, &[vec![0b000011, 0b000110]]);
        assert_ne!(a, b);
    }
}
