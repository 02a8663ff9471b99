//! Canonical forms, equivalence and automorphism groups of trades and word
//! sets under coordinate permutations and translations.

mod refine;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Result, TradeError};
use crate::trade::{KWayTrade, Trade, TradeKind};
use crate::word::{CoordPermutation, GraphAutomorphism, Word, MAX_LEN};

use refine::{relabel, Canonizer, Config, Feed, Labeling};

/// Total-order key of an equivalence class: `n`, the sizes of all parts
/// but the last, then the sorted words of each part after canonical
/// relabeling.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    key: Vec<u16>,
}

impl CanonicalForm {
    pub fn key(&self) -> &[u16] {
        &self.key
    }

    /// Lowercase hex of the key as little-endian 16-bit integers.
    pub fn hex(&self) -> String {
        let mut s = String::with_capacity(self.key.len() * 4);
        for v in &self.key {
            for b in v.to_le_bytes() {
                s.push_str(&format!("{b:02x}"));
            }
        }
        s
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bad = || TradeError::Parse { line: 0, msg: format!("bad canonical key {s:?}") };
        if s.len() % 4 != 0 || !s.is_ascii() {
            return Err(bad());
        }
        let mut key = Vec::with_capacity(s.len() / 4);
        for chunk in s.as_bytes().chunks(4) {
            let chunk = std::str::from_utf8(chunk).map_err(|_| bad())?;
            let lo = u8::from_str_radix(&chunk[..2], 16).map_err(|_| bad())?;
            let hi = u8::from_str_radix(&chunk[2..], 16).map_err(|_| bad())?;
            key.push(u16::from_le_bytes([lo, hi]));
        }
        Ok(CanonicalForm { key })
    }

    /// Word count of the first part (or the whole set for a single part).
    pub fn part_size(&self) -> usize {
        self.key.get(1).copied().unwrap_or(0) as usize
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

/// Label-invariant fingerprint of a base word: distance histograms to the
/// words of its own part and of the other parts.
fn base_invariant(n: usize, own: &[u32], other: &[&[u32]], t: u32) -> Vec<u32> {
    let mut h = vec![0u32; 2 * (n + 1)];
    for &w in own {
        h[(w ^ t).count_ones() as usize] += 1;
    }
    for part in other {
        for &w in *part {
            h[n + 1 + (w ^ t).count_ones() as usize] += 1;
        }
    }
    h
}

/// For each candidate base word, the translated configuration with the
/// part containing it moved to the front; only bases with the minimal
/// fingerprint are kept.
fn translated_configs(n: usize, parts: &[Vec<u32>]) -> Vec<(u32, usize, Vec<Vec<u32>>)> {
    let mut cands: Vec<(Vec<u32>, u32, usize)> = Vec::new();
    for (pi, part) in parts.iter().enumerate() {
        let others: Vec<&[u32]> = parts.iter().enumerate().filter(|&(j, _)| j != pi).map(|(_, p)| p.as_slice()).collect();
        for &t in part {
            cands.push((base_invariant(n, part, &others, t), t, pi));
        }
    }
    let Some(min) = cands.iter().map(|c| c.0.clone()).min() else {
        return Vec::new();
    };
    cands
        .into_iter()
        .filter(|c| c.0 == min)
        .map(|(_, t, pi)| {
            let mut cfg = vec![parts[pi].iter().map(|&w| w ^ t).collect::<Vec<_>>()];
            for (j, p) in parts.iter().enumerate() {
                if j != pi {
                    cfg.push(p.iter().map(|&w| w ^ t).collect());
                }
            }
            (t, pi, cfg)
        })
        .collect()
}

/// Orderings of `1..k` appended to a leading 0.
fn tail_orders(k: usize) -> Vec<Vec<usize>> {
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut (1..k).collect(), &mut vec![0], &mut out);
    out
}

fn minimize(n: usize, configs: impl IntoIterator<Item = Vec<Vec<u32>>>) -> Vec<u16> {
    let mut c = Canonizer::new();
    for parts in configs {
        c.feed(&Config::new(n, &parts));
    }
    c.encoding().map(|e| e.to_vec()).unwrap_or_default()
}

/// Canonical key of parts under translations and coordinate permutations;
/// the order of all parts after the first is free.
pub(crate) fn key_with_translations(n: usize, parts: &[Vec<u32>]) -> Vec<u16> {
    let orders = tail_orders(parts.len());
    let configs = translated_configs(n, parts)
        .into_iter()
        .flat_map(|(_, _, cfg)| orders.iter().map(move |o| o.iter().map(|&i| cfg[i].clone()).collect::<Vec<_>>()).collect::<Vec<_>>());
    minimize(n, configs)
}

/// Canonical key of an unordered pair under coordinate permutations only.
pub(crate) fn key_pair_permonly(n: usize, t0: &[u32], t1: &[u32], allow_complement: bool) -> Vec<u16> {
    let mut configs = vec![vec![t0.to_vec(), t1.to_vec()], vec![t1.to_vec(), t0.to_vec()]];
    if allow_complement {
        let m = crate::word::full_mask(n);
        let c = |v: &[u32]| v.iter().map(|&w| w ^ m).collect::<Vec<_>>();
        configs.push(vec![c(t0), c(t1)]);
        configs.push(vec![c(t1), c(t0)]);
    }
    minimize(n, configs)
}

/// Canonical key of ordered parts under coordinate permutations only.
pub(crate) fn key_ordered_permonly(n: usize, parts: &[Vec<u32>]) -> Vec<u16> {
    minimize(n, [parts.to_vec()])
}

/// Order of the group of coordinate permutations mapping `T0 ∪ T1` onto
/// itself (each part fixed or the two exchanged).
pub fn sym_order_unordered(t0: &[Word], t1: &[Word]) -> u64 {
    let n = t0.first().or(t1.first()).map(|w| w.len()).unwrap_or(1);
    let (a, b) = (bits(t0), bits(t1));
    let cfg = Config::new(n, &[a.clone(), b.clone()]);
    let fixed = refine::automorphisms(&cfg).len() as u64;
    let mut c = Canonizer::new();
    c.feed(&cfg);
    let swaps = matches!(c.feed(&Config::new(n, &[b, a])), Feed::Equal(_));
    fixed * if swaps { 2 } else { 1 }
}

fn bits(words: &[Word]) -> Vec<u32> {
    words.iter().map(|w| w.bits()).collect()
}

fn johnson_complement_allowed(t: &Trade) -> bool {
    matches!(t.kind(), TradeKind::Steiner(k) if 2 * k == t.n())
}

/// Canonical form of a trade under its ambient graph's automorphisms, with
/// the two parts unordered. Extended and 1-perfect trades admit
/// translations; Steiner trades only permutations (and the global
/// complement when `n = 2k`).
pub fn canonical_form(t: &Trade) -> CanonicalForm {
    let (n, t0, t1) = (t.n(), bits(t.t0()), bits(t.t1()));
    let key = match t.kind() {
        TradeKind::Steiner(_) => key_pair_permonly(n, &t0, &t1, johnson_complement_allowed(t)),
        _ => key_with_translations(n, &[t0, t1]),
    };
    CanonicalForm { key }
}

/// Canonical form of a k-way trade; the parts form an unordered tuple.
pub fn canonical_form_kway(t: &KWayTrade) -> CanonicalForm {
    let n = t.n();
    let parts: Vec<Vec<u32>> = t.parts().iter().map(|p| bits(p)).collect();
    let key = match t.kind() {
        TradeKind::Steiner(k) => {
            let m = crate::word::full_mask(n);
            let mut configs = Vec::new();
            for first in 0..parts.len() {
                let rest: Vec<usize> = (0..parts.len()).filter(|&j| j != first).collect();
                for o in tail_orders(parts.len()) {
                    let cfg: Vec<Vec<u32>> =
                        o.iter().map(|&i| if i == 0 { parts[first].clone() } else { parts[rest[i - 1]].clone() }).collect();
                    if 2 * k == n {
                        configs.push(cfg.iter().map(|p| p.iter().map(|&w| w ^ m).collect()).collect());
                    }
                    configs.push(cfg);
                }
            }
            minimize(n, configs)
        }
        _ => key_with_translations(n, &parts),
    };
    CanonicalForm { key }
}

/// Canonical form of a single word set under coordinate permutations and,
/// optionally, the global complement.
pub fn canonical_form_permonly(s: &[Word], allow_complement: bool) -> CanonicalForm {
    let n = s.first().map(|w| w.len()).unwrap_or(1);
    let set = bits(s);
    let mut configs = vec![vec![set.clone()]];
    if allow_complement {
        let m = crate::word::full_mask(n);
        configs.push(vec![set.iter().map(|&w| w ^ m).collect()]);
    }
    CanonicalForm { key: minimize(n, configs) }
}

/// Canonical form of an unordered pair of word sets under coordinate
/// permutations and, optionally, the global complement.
pub fn canonical_form_pair_permonly(t0: &[Word], t1: &[Word], allow_complement: bool) -> CanonicalForm {
    let n = t0.first().or(t1.first()).map(|w| w.len()).unwrap_or(1);
    CanonicalForm { key: key_pair_permonly(n, &bits(t0), &bits(t1), allow_complement) }
}

pub fn are_equivalent(a: &Trade, b: &Trade) -> Result<bool> {
    if a.n() != b.n() {
        return Err(TradeError::LengthMismatch(a.n(), b.n()));
    }
    if a.kind() != b.kind() {
        return Err(TradeError::KindMismatch { expected: a.kind().to_string(), found: b.kind().to_string() });
    }
    if a.volume() != b.volume() {
        return Ok(false);
    }
    Ok(canonical_form(a) == canonical_form(b))
}

/// A coordinate permutation mapping `a` onto `b` (as unordered pairs, with
/// translations), if the trades are equivalent.
pub fn find_isomorphism(a: &Trade, b: &Trade) -> Option<GraphAutomorphism> {
    let n = a.n();
    if n != b.n() || a.volume() != b.volume() {
        return None;
    }
    let pa = translated_configs(n, &[bits(a.t0()), bits(a.t1())]);
    let pb = translated_configs(n, &[bits(b.t0()), bits(b.t1())]);
    let (ta, _, ca) = pa.first()?;
    let mut canon = Canonizer::new();
    let Feed::Better(la) = canon.feed(&Config::new(n, ca)) else { unreachable!() };
    for (tb, _, cb) in &pb {
        if let Feed::Equal(lb) = canon.feed(&Config::new(n, cb)) {
            // relabel(ca, la) = relabel(cb, lb)
            let sigma = compose_inv(&la, &lb, n);
            let perm = to_perm(&sigma, n);
            let tr = perm.apply(Word::from_raw(*ta, n)).bits() ^ tb;
            return Some(GraphAutomorphism { perm, translation: Word::from_raw(tr, n) });
        }
    }
    None
}

/// `σ = lb⁻¹ ∘ la`: maps whatever `la` canonicalizes onto the preimage under `lb`.
fn compose_inv(la: &Labeling, lb: &Labeling, n: usize) -> Labeling {
    let mut inv = [0u8; MAX_LEN];
    for i in 0..n {
        inv[lb[i] as usize] = i as u8;
    }
    let mut s = [0u8; MAX_LEN];
    for i in 0..n {
        s[i] = inv[la[i] as usize];
    }
    s
}

fn to_perm(l: &Labeling, n: usize) -> CoordPermutation {
    let images: Vec<usize> = l[..n].iter().map(|&x| x as usize).collect();
    CoordPermutation::from_images(&images).expect("labeling is a bijection")
}

/// Automorphism group data of a trade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutReport {
    pub order: u64,
    /// `|{x : x + (T0 ∪ T1) = T0 ∪ T1}|`.
    pub translation_count: u64,
    /// Order of the group of coordinate permutations induced by `Aut`.
    pub perm_stabilizer_order: u64,
    pub generators: Vec<GraphAutomorphism>,
    pub coordinate_orbits: Vec<Vec<usize>>,
    /// Sizes of the orbits on `T0 ∪ T1`, descending.
    pub word_orbit_sizes: Vec<usize>,
    pub part_swapping: bool,
}

impl AutReport {
    /// Coordinate orbits as `{0,2,4,5},{1,3},…` using hex digits beyond 9.
    pub fn orbits_display(&self) -> String {
        self.coordinate_orbits
            .iter()
            .map(|o| {
                let inner: Vec<String> = o.iter().map(|&c| format!("{c:x}")).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// The group of graph automorphisms stabilising `T0 ∪ T1` (which, for a
/// trade with a connected distance graph, preserves or swaps the parts).
/// Steiner trades use the Johnson group: permutations, plus the
/// complement when `n = 2k`.
pub fn automorphisms(t: &Trade) -> AutReport {
    let n = t.n();
    let t0 = bits(t.t0());
    let t1 = bits(t.t1());
    let union: HashSet<u32> = t0.iter().chain(&t1).copied().collect();

    let (base, base_part, base_cfg, class): (u32, usize, Vec<Vec<u32>>, Vec<(u32, usize, Labeling, Labeling)>);
    if let TradeKind::Steiner(_) = t.kind() {
        // translations are limited to 0 and, when allowed, 1^n
        let m = crate::word::full_mask(n);
        let mut bases = vec![0u32];
        if johnson_complement_allowed(t) {
            bases.push(m);
        }
        let cfgs: Vec<(u32, usize, Vec<Vec<u32>>)> = bases
            .iter()
            .flat_map(|&x| {
                let a: Vec<u32> = t0.iter().map(|&w| w ^ x).collect();
                let b: Vec<u32> = t1.iter().map(|&w| w ^ x).collect();
                [(x, 0usize, vec![a.clone(), b.clone()]), (x, 1usize, vec![b, a])]
            })
            .collect();
        base = 0;
        base_part = 0;
        base_cfg = cfgs[0].2.clone();
        class = matching_bases(n, &base_cfg, &cfgs);
    } else {
        let cfgs = translated_configs(n, &[t0.clone(), t1.clone()]);
        let (b, bp, bc) = cfgs[0].clone();
        base = b;
        base_part = bp;
        base_cfg = bc;
        class = matching_bases(n, &base_cfg, &cfgs);
    }

    let cfg = Config::new(n, &base_cfg);
    let sym = refine::automorphisms(&cfg);
    let sym_order = sym.len() as u64;
    let order = sym_order * class.len() as u64;

    // Aut element from σ mapping the base configuration onto the one based at `x`:
    // w ↦ σ(w ^ base) ^ x, or for Steiner trades w ↦ σ(w ^ base) ^ x with x ∈ {0, 1^n}.
    let make = |sigma: &Labeling, x: u32| -> GraphAutomorphism {
        let perm = to_perm(sigma, n);
        let tr = perm.apply(Word::from_raw(base, n)).bits() ^ x;
        GraphAutomorphism { perm, translation: Word::from_raw(tr, n) }
    };
    let words: Vec<Word> = {
        let mut v: Vec<u32> = union.iter().copied().collect();
        v.sort_unstable();
        v.into_iter().map(|w| Word::from_raw(w, n)).collect()
    };
    let index: HashMap<u32, usize> = words.iter().enumerate().map(|(i, w)| (w.bits(), i)).collect();
    // the stabiliser elements are determined by their coordinate permutation
    let mut generators: Vec<GraphAutomorphism> = stabiliser_generators(&sym, n).iter().map(|s| make(s, base)).collect();
    // add coset representatives until the base point reaches every matching base
    let first = *t0.first().expect("nonempty");
    loop {
        let reached = base_orbit((base, base_part), &generators, n, |w| t0.contains(&w), first);
        match class.iter().find(|c| !reached.contains(&(c.0, c.1))) {
            Some((x, _, la, lx)) => generators.push(make(&compose_inv(la, lx, n), *x)),
            None => break,
        }
    }
    let as_word_perm = |g: &GraphAutomorphism| -> Vec<usize> { words.iter().map(|&w| index[&g.apply(w).bits()]).collect() };

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for g in &generators {
        for i in 0..n {
            let (a, b) = (find(&mut parent, i), find(&mut parent, g.perm.image(i)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut orbit_map: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        orbit_map.entry(r).or_default().push(i);
    }
    let coordinate_orbits: Vec<Vec<usize>> = orbit_map.into_values().collect();

    let gen_perms: Vec<Vec<usize>> = generators.iter().map(&as_word_perm).collect();
    let mut seen = vec![false; words.len()];
    let mut word_orbit_sizes = Vec::new();
    for s in 0..words.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut size = 0;
        let mut q = VecDeque::from([s]);
        while let Some(i) = q.pop_front() {
            size += 1;
            for g in &gen_perms {
                if !seen[g[i]] {
                    seen[g[i]] = true;
                    q.push_back(g[i]);
                }
            }
        }
        word_orbit_sizes.push(size);
    }
    word_orbit_sizes.sort_unstable_by(|a, b| b.cmp(a));

    let translation_count = match t.kind() {
        TradeKind::Steiner(_) => 1 + (johnson_complement_allowed(t)
            && union.iter().all(|&w| union.contains(&(w ^ crate::word::full_mask(n))))) as u64,
        _ => {
            let any = *t0.first().expect("nonempty");
            union.iter().filter(|&&w| union.iter().all(|&u| union.contains(&(u ^ w ^ any)))).count() as u64
        }
    };
    let part_swapping = class.iter().any(|&(_, p, _, _)| p != base_part);

    AutReport {
        order,
        translation_count,
        perm_stabilizer_order: order / translation_count,
        generators,
        coordinate_orbits,
        word_orbit_sizes,
        part_swapping,
    }
}

/// Bases whose configuration is isomorphic to `base_cfg`, with labelings
/// `(la, lx)` such that `relabel(base_cfg, la) = relabel(cfg_x, lx)`.
fn matching_bases(
    n: usize,
    base_cfg: &[Vec<u32>],
    cfgs: &[(u32, usize, Vec<Vec<u32>>)],
) -> Vec<(u32, usize, Labeling, Labeling)> {
    let mut canon = Canonizer::new();
    let la = match canon.feed(&Config::new(n, base_cfg)) {
        Feed::Better(l) => l,
        _ => unreachable!("first configuration always sets the best"),
    };
    let mut out = Vec::new();
    for (x, p, cfg) in cfgs {
        let mut c = Canonizer::new();
        c.feed(&Config::new(n, base_cfg));
        if let Feed::Equal(lx) = c.feed(&Config::new(n, cfg)) {
            out.push((*x, *p, la, lx));
        }
    }
    out
}

/// A generating set of a permutation group given by all its elements:
/// greedily keeps elements outside the closure of those kept so far.
fn stabiliser_generators(group: &[Labeling], n: usize) -> Vec<Labeling> {
    let mut id = [0u8; MAX_LEN];
    for (i, v) in id.iter_mut().enumerate() {
        *v = i as u8;
    }
    let compose = |a: &Labeling, b: &Labeling| -> Labeling {
        let mut c = id;
        for i in 0..n {
            c[i] = b[a[i] as usize];
        }
        c
    };
    let mut gens: Vec<Labeling> = Vec::new();
    let mut members: HashSet<Labeling> = HashSet::from([id]);
    let mut closure: Vec<Labeling> = vec![id];
    for g in group {
        let mut g2 = id;
        g2[..n].copy_from_slice(&g[..n]);
        if members.contains(&g2) {
            continue;
        }
        gens.push(g2);
        let mut frontier = closure.clone();
        while let Some(h) = frontier.pop() {
            for s in &gens {
                let k = compose(&h, s);
                if members.insert(k) {
                    closure.push(k);
                    frontier.push(k);
                }
            }
        }
        if closure.len() == group.len() {
            break;
        }
    }
    gens
}

/// Orbit of a (translation, part) pair under `gens`.
fn base_orbit(
    start: (u32, usize),
    gens: &[GraphAutomorphism],
    n: usize,
    in_t0: impl Fn(u32) -> bool,
    first: u32,
) -> HashSet<(u32, usize)> {
    let swaps: Vec<bool> = gens.iter().map(|g| !in_t0(g.apply(Word::from_raw(first, n)).bits())).collect();
    let mut seen = HashSet::from([start]);
    let mut q = vec![start];
    while let Some((x, p)) = q.pop() {
        for (g, &sw) in gens.iter().zip(&swaps) {
            let y = (g.apply(Word::from_raw(x, n)).bits(), p ^ sw as usize);
            if seen.insert(y) {
                q.push(y);
            }
        }
    }
    seen
}

/// Relabels every word of `parts` by a labeling.
#[allow(dead_code)]
pub(crate) fn relabel_parts(parts: &[Vec<u32>], lab: &Labeling) -> Vec<Vec<u32>> {
    parts.iter().map(|p| p.iter().map(|&w| relabel(w, lab)).collect()).collect()
}
