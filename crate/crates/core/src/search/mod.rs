//! Exhaustive classification of primary extended 1-perfect trades.
//!
//! The search grows a trade from a fixed seed by completing neighbourhoods
//! (see [`engine`]). Optionally the tree is cut at checkpoint depths: all
//! partial states reached after that many frontier expansions are
//! canonicalized and equivalent ones merged, with multiplicities recording
//! how many original states each survivor stands for. The completions of a
//! partial state do not depend on its frontier, so equivalent states have
//! equally many completions and the weighted solution count equals the
//! count of the undeduplicated search.

mod checkpoint;
mod engine;
mod mate;

use std::collections::BTreeMap;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::canonical::{self, automorphisms, CanonicalForm};
use crate::error::{Result, TradeError};
use crate::trade::{is_primary, Trade, TradeKind};
use crate::word::{full_mask, Word};

pub use checkpoint::{read_checkpoint, write_checkpoint, Checkpoint};
pub use mate::{find_third_mate, third_mate_kway};

use engine::{Engine, Event, Rules};

/// Anchor word of the constant-weight seed: ones on the right half.
pub fn cw_anchor(n: usize) -> u32 {
    full_mask(n) & !full_mask(n / 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: usize,
    pub constant_weight: bool,
    /// Every word of `T0` must belong to this set (constant-weight mode only).
    pub restrict_t0: Option<Vec<Word>>,
    /// Root-expansion counts after which equivalent partial states are merged.
    pub checkpoint_depths: Vec<usize>,
    /// 1 runs single-threaded.
    pub workers: usize,
    /// Written after every checkpoint.
    pub checkpoint_file: Option<PathBuf>,
    /// Resumes from a file written by an earlier run with the same configuration.
    pub resume_from: Option<PathBuf>,
}

impl SearchConfig {
    /// Defaults: checkpoints `[3, 6]` for constant-weight searches,
    /// `[1, 4, 7]` for restricted ones and none otherwise.
    pub fn new(n: usize, constant_weight: bool) -> Self {
        let checkpoint_depths = if constant_weight { vec![3, 6] } else { Vec::new() };
        SearchConfig {
            n,
            constant_weight,
            restrict_t0: None,
            checkpoint_depths,
            workers: 1,
            checkpoint_file: None,
            resume_from: None,
        }
    }

    pub fn restricted(n: usize, w: Vec<Word>) -> Self {
        SearchConfig { restrict_t0: Some(w), checkpoint_depths: vec![1, 4, 7], ..SearchConfig::new(n, true) }
    }

    pub fn with_checkpoints(mut self, depths: Vec<usize>) -> Self {
        self.checkpoint_depths = depths;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if !(2..=16).contains(&n) || n % 2 == 1 {
            return Err(TradeError::Unsupported(format!("length {n}: the search needs an even length in 2..=16")));
        }
        if self.constant_weight && n % 4 != 0 {
            return Err(TradeError::Unsupported(format!(
                "constant-weight search for length {n}: only lengths divisible by 4 are supported"
            )));
        }
        if self.restrict_t0.is_some() && !self.constant_weight {
            return Err(TradeError::Unsupported("restricted search requires constant-weight mode".into()));
        }
        if self.checkpoint_depths.windows(2).any(|w| w[0] >= w[1]) || self.checkpoint_depths.first() == Some(&0) {
            return Err(TradeError::Precondition("checkpoint depths must be positive and increasing".into()));
        }
        Ok(())
    }
}

/// A partial trade during the search; word fields are bitmasks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialState {
    pub n: usize,
    pub t0: Vec<u32>,
    pub t1: Vec<u32>,
    pub frontier0: Vec<u32>,
    pub frontier1: Vec<u32>,
    pub multiplicity: u64,
}

impl PartialState {
    pub fn words(part: &[u32], n: usize) -> Vec<Word> {
        part.iter().map(|&b| Word::from_raw(b, n)).collect()
    }
}

/// The fixed starting configuration of a search.
pub fn seed_state(cfg: &SearchConfig) -> Result<PartialState> {
    cfg.validate()?;
    let n = cfg.n;
    let full = full_mask(n);
    let h = n / 2;
    let mut s = PartialState { n, t0: vec![], t1: vec![], frontier0: vec![], frontier1: vec![], multiplicity: 1 };
    if let Some(w) = &cfg.restrict_t0 {
        let a = cw_anchor(n);
        if !w.iter().any(|x| x.bits() == a) || !w.iter().any(|x| x.bits() == a ^ full) {
            return Err(TradeError::Precondition("restriction set must contain the anchor and its complement".into()));
        }
        s.t0 = vec![a, a ^ full];
        s.frontier0 = vec![a];
    } else if cfg.constant_weight {
        let a = cw_anchor(n);
        s.t0 = vec![a, a ^ full];
        for k in 0..h {
            let v = a ^ (1 << k) ^ (1 << (h + k));
            s.t1.push(v);
            s.t1.push(v ^ full);
            s.frontier1.push(v);
        }
    } else {
        s.t0.push(0);
        s.t1.push(full);
        for i in 0..h {
            let v = 0b11u32 << (2 * i);
            s.t1.push(v);
            s.frontier1.push(v);
            if n % 4 == 2 {
                s.t0.push(v ^ full);
            } else {
                s.t1.push(v ^ full);
            }
        }
        if n % 4 == 0 {
            // the complement of 0 stays in T0
            s.t1.retain(|&w| w != full);
            s.t0.push(full);
        }
    }
    // for n <= 4 some seed words coincide with complements of others
    for v in [&mut s.t0, &mut s.t1, &mut s.frontier0, &mut s.frontier1] {
        v.sort_unstable();
        v.dedup();
    }
    Ok(s)
}

/// One equivalence class found by a search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRecord {
    pub trade: Trade,
    pub key: CanonicalForm,
    pub volume: usize,
    /// Solutions of the (possibly merged) search falling in this class.
    pub solutions: u64,
    /// Multiplicity-weighted solutions.
    pub weighted: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CheckpointStat {
    pub depth: usize,
    pub before: usize,
    pub after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationResult {
    pub n: usize,
    pub constant_weight: bool,
    /// Sorted by `(volume, key)`.
    pub classes: Vec<ClassRecord>,
    pub raw_solution_count: u64,
    pub weighted_solution_count: u64,
    pub checkpoints: Vec<CheckpointStat>,
    pub nodes: u64,
}

impl ClassificationResult {
    pub fn volumes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.volume).collect()
    }

    pub fn trades(&self) -> Vec<Trade> {
        self.classes.iter().map(|c| c.trade.clone()).collect()
    }
}

/// Record file of a classification: one commented trade record per class.
/// Depends only on the configuration, never on the worker count or timing.
pub fn write_classification(r: &ClassificationResult) -> String {
    use std::fmt::Write as _;
    let mut out = format!(
        "# classify n={} constant-weight={} classes={} raw={} weighted={}\n",
        r.n,
        r.constant_weight,
        r.classes.len(),
        r.raw_solution_count,
        r.weighted_solution_count
    );
    for (i, c) in r.classes.iter().enumerate() {
        let _ = writeln!(out, "# class {} volume={} solutions={} weighted={}", i + 1, c.volume, c.solutions, c.weighted);
        out.push_str(&crate::format::write_trade(&c.trade));
    }
    out
}

/// Class key of a complete trade: the full halved-cube group, or
/// coordinate permutations only in constant-weight mode.
pub fn class_key(t: &Trade, constant_weight: bool) -> CanonicalForm {
    if constant_weight {
        canonical::canonical_form_pair_permonly(t.t0(), t.t1(), true)
    } else {
        canonical::canonical_form(t)
    }
}

struct Search {
    cfg: SearchConfig,
    rules: Rules,
    /// Relabeled restriction set, included as a fixed colour in checkpoint keys.
    restrict_bits: Option<Vec<u32>>,
}

fn par_map<T: Sync, U: Send>(workers: usize, items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
    pool.install(|| items.par_iter().map(f).collect())
}

struct Expansion {
    partials: Vec<PartialState>,
    solutions: Vec<(Vec<u32>, Vec<u32>, u64)>,
    nodes: u64,
}

impl Search {
    fn new(cfg: SearchConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.n;
        let restrict_bits: Option<Vec<u32>> = cfg.restrict_t0.as_ref().map(|w| {
            let mut v: Vec<u32> = w.iter().map(|x| x.bits()).collect();
            v.sort_unstable();
            v
        });
        let allowed = restrict_bits.as_ref().map(|v| {
            let mut a = vec![false; 1 << n];
            for &x in v {
                a[x as usize] = true;
            }
            a
        });
        let rules = Rules::new(n, cfg.constant_weight, allowed);
        Ok(Search { cfg, rules, restrict_bits })
    }

    fn expand(&self, state: &PartialState, budget: Option<usize>) -> Expansion {
        let mut out = Expansion { partials: vec![], solutions: vec![], nodes: 0 };
        let Some(mut e) = Engine::from_state(&self.rules, state) else {
            return out;
        };
        let mult = state.multiplicity;
        let mut sink = |ev: Event<'_>| match ev {
            Event::Solution(e) => {
                let s = e.snapshot(mult);
                out.solutions.push((s.t0, s.t1, mult));
            }
            Event::Partial(e) => out.partials.push(e.snapshot(mult)),
        };
        e.run(budget, &mut sink);
        out.nodes = e.nodes;
        out
    }

    fn state_key(&self, s: &PartialState) -> Vec<u16> {
        let n = self.cfg.n;
        match &self.restrict_bits {
            Some(w) => canonical::key_ordered_permonly(n, &[s.t0.clone(), s.t1.clone(), w.clone()]),
            None if self.cfg.constant_weight => canonical::key_pair_permonly(n, &s.t0, &s.t1, false),
            None => canonical::key_with_translations(n, &[s.t0.clone(), s.t1.clone()]),
        }
    }

    /// Merges equivalent states, keeping the one with the least
    /// `(T0, T1)` and summing multiplicities. Output is sorted by key.
    fn merge(&self, states: Vec<PartialState>) -> Vec<PartialState> {
        let keys = par_map(self.cfg.workers, &states, |s| self.state_key(s));
        let mut groups: BTreeMap<Vec<u16>, PartialState> = BTreeMap::new();
        for (k, s) in keys.into_iter().zip(states) {
            match groups.get_mut(&k) {
                None => {
                    groups.insert(k, s);
                }
                Some(rep) => {
                    let mult = rep.multiplicity + s.multiplicity;
                    if (&s.t0, &s.t1) < (&rep.t0, &rep.t1) {
                        *rep = s;
                    }
                    rep.multiplicity = mult;
                }
            }
        }
        groups.into_values().collect()
    }

    fn run(&self) -> Result<ClassificationResult> {
        let depths = self.cfg.checkpoint_depths.clone();
        let mut solutions: Vec<(Vec<u32>, Vec<u32>, u64)> = Vec::new();
        let mut stats = Vec::new();
        let mut nodes = 0u64;
        let (mut states, mut stage, mut done_depth) = match &self.cfg.resume_from {
            Some(path) => {
                let cp = read_checkpoint(&std::fs::read_to_string(path).map_err(|e| {
                    TradeError::Precondition(format!("cannot read {}: {e}", path.display()))
                })?)?;
                if cp.n != self.cfg.n || cp.constant_weight != self.cfg.constant_weight || cp.depths != depths {
                    return Err(TradeError::Precondition("checkpoint file does not match the configuration".into()));
                }
                solutions.extend(cp.solutions.into_iter().map(|s| (s.t0, s.t1, s.multiplicity)));
                stats = cp.stats;
                nodes = cp.nodes;
                (cp.states, cp.stage, depths[cp.stage - 1])
            }
            None => (vec![seed_state(&self.cfg)?], 0, 0),
        };
        while stage < depths.len() {
            let budget = depths[stage] - done_depth;
            let expanded = par_map(self.cfg.workers, &states, |s| self.expand(s, Some(budget)));
            let mut partials = Vec::new();
            for ex in expanded {
                nodes += ex.nodes;
                solutions.extend(ex.solutions);
                partials.extend(ex.partials);
            }
            let before = partials.len();
            states = self.merge(partials);
            stats.push(CheckpointStat { depth: depths[stage], before, after: states.len() });
            done_depth = depths[stage];
            stage += 1;
            if let Some(path) = &self.cfg.checkpoint_file {
                let n = self.cfg.n;
                let cp = Checkpoint {
                    n,
                    constant_weight: self.cfg.constant_weight,
                    depths: depths.clone(),
                    stage,
                    states: states.clone(),
                    solutions: solutions
                        .iter()
                        .map(|(t0, t1, m)| PartialState {
                            n,
                            t0: t0.clone(),
                            t1: t1.clone(),
                            frontier0: vec![],
                            frontier1: vec![],
                            multiplicity: *m,
                        })
                        .collect(),
                    nodes,
                    stats: stats.clone(),
                };
                std::fs::write(path, write_checkpoint(&cp))
                    .map_err(|e| TradeError::Precondition(format!("cannot write {}: {e}", path.display())))?;
            }
        }
        let expanded = par_map(self.cfg.workers, &states, |s| self.expand(s, None));
        for ex in expanded {
            nodes += ex.nodes;
            solutions.extend(ex.solutions);
        }
        self.collect(solutions, stats, nodes)
    }

    fn collect(
        &self,
        solutions: Vec<(Vec<u32>, Vec<u32>, u64)>,
        checkpoints: Vec<CheckpointStat>,
        nodes: u64,
    ) -> Result<ClassificationResult> {
        let n = self.cfg.n;
        let cw = self.cfg.constant_weight;
        let keyed: Vec<Result<(CanonicalForm, Trade, u64)>> = par_map(self.cfg.workers, &solutions, |(t0, t1, m)| {
            let t = Trade::extended_from_bits(n, t0, t1)?;
            if !is_primary(&t)? {
                return Err(TradeError::InvalidTrade("search produced a non-primary trade".into()));
            }
            Ok((class_key(&t, cw), t, *m))
        });
        let mut classes: BTreeMap<(usize, CanonicalForm), ClassRecord> = BTreeMap::new();
        let mut raw = 0u64;
        let mut weighted = 0u64;
        for item in keyed {
            let (key, t, m) = item?;
            raw += 1;
            weighted += m;
            let entry = classes.entry((t.volume(), key.clone())).or_insert_with(|| ClassRecord {
                trade: t.clone(),
                key,
                volume: t.volume(),
                solutions: 0,
                weighted: 0,
            });
            entry.solutions += 1;
            entry.weighted += m;
            if (t.t0(), t.t1()) < (entry.trade.t0(), entry.trade.t1()) {
                entry.trade = t;
            }
        }
        Ok(ClassificationResult {
            n,
            constant_weight: cw,
            classes: classes.into_values().collect(),
            raw_solution_count: raw,
            weighted_solution_count: weighted,
            checkpoints,
            nodes,
        })
    }
}

/// Runs the configured search.
pub fn classify(cfg: &SearchConfig) -> Result<ClassificationResult> {
    if cfg.restrict_t0.is_some() {
        return classify_restricted(cfg);
    }
    Search::new(cfg.clone())?.run()
}

/// Constant-weight search in which `T0` must lie in `W`. `W` is relabeled
/// so that it contains the anchor word; the class list is unaffected.
pub fn classify_restricted(cfg: &SearchConfig) -> Result<ClassificationResult> {
    let w = cfg
        .restrict_t0
        .as_ref()
        .ok_or_else(|| TradeError::Precondition("restricted search without a restriction set".into()))?;
    let n = cfg.n;
    let a = cw_anchor(n);
    let full = full_mask(n);
    let Some(block) = w.iter().find(|x| x.weight() == n / 2 && w.iter().any(|y| y.bits() == x.bits() ^ full)) else {
        // no complement-closed half-weight word: nothing can be seeded
        return Ok(ClassificationResult {
            n,
            constant_weight: true,
            classes: vec![],
            raw_solution_count: 0,
            weighted_solution_count: 0,
            checkpoints: vec![],
            nodes: 0,
        });
    };
    let ones: Vec<usize> = block.support();
    let zeros: Vec<usize> = (0..n).filter(|i| !block.get(*i)).collect();
    let mut images = vec![0usize; n];
    for (k, &i) in zeros.iter().enumerate() {
        images[i] = k;
    }
    for (k, &i) in ones.iter().enumerate() {
        images[i] = n / 2 + k;
    }
    let perm = crate::word::CoordPermutation::from_images(&images)?;
    debug_assert_eq!(perm.apply(*block).bits(), a);
    let relabeled: Vec<Word> = w.iter().map(|&x| perm.apply(x)).collect();
    let inner = SearchConfig { restrict_t0: Some(relabeled), ..cfg.clone() };
    let mut result = Search::new(inner)?.run()?;
    // report trades in the caller's labeling
    let inv = perm.inverse();
    for c in &mut result.classes {
        let map = |v: &[Word]| v.iter().map(|&x| inv.apply(x)).collect::<Vec<_>>();
        c.trade = Trade::new(TradeKind::Extended1Perfect, map(c.trade.t0()), map(c.trade.t1()))?;
    }
    Ok(result)
}

/// Result of the double-counting check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoubleCount {
    pub expected: u64,
    pub observed: u64,
    pub ok: bool,
}

/// Compares the number of labeled solutions with the count predicted from
/// the automorphism groups of the classes.
///
/// Without the weight restriction, a class with `|T0 ∪ T1| = m` contributes
/// `m · (n/2)! · 2^(n/2) / |Aut|` solutions through the fixed seed
/// neighbourhood of `0`. In constant-weight mode the ambient group is the
/// symmetric group and the contribution is `m · (n/2)! / |Sym|`, where
/// `Sym` is the group of coordinate permutations stabilising `T0 ∪ T1`.
pub fn double_count_validate(r: &ClassificationResult, cfg: &SearchConfig) -> Result<DoubleCount> {
    let n = cfg.n as u64;
    let half_fact: u64 = (1..=n / 2).product();
    let mut expected = 0u64;
    for c in &r.classes {
        let m = 2 * c.volume as u64;
        let (num, den) = if cfg.constant_weight {
            (m * half_fact, canonical::sym_order_unordered(c.trade.t0(), c.trade.t1()))
        } else {
            (m * half_fact * (1u64 << (n / 2)), automorphisms(&c.trade).order)
        };
        if num % den != 0 {
            return Err(TradeError::Precondition(format!(
                "class of volume {} contributes the non-integer {num}/{den}",
                c.volume
            )));
        }
        expected += num / den;
    }
    let observed = if cfg.checkpoint_depths.is_empty() { r.raw_solution_count } else { r.weighted_solution_count };
    Ok(DoubleCount { expected, observed, ok: expected == observed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds() {
        let s = seed_state(&SearchConfig::new(10, false)).unwrap();
        assert_eq!(s.t0.len(), 6);
        assert_eq!(s.t1.len(), 6);
        assert_eq!(s.frontier1.len(), 5);
        assert!(s.t0.contains(&0));
        assert!(s.t0.contains(&Word::parse("1111111100").unwrap().bits()));
        assert!(s.t1.contains(&Word::parse("0000000011").unwrap().bits()));
        let s = seed_state(&SearchConfig::new(12, true)).unwrap();
        assert!(s.t0.contains(&Word::parse("000000111111").unwrap().bits()));
        assert_eq!(s.t1.len(), 12);
        let s = seed_state(&SearchConfig::new(8, false)).unwrap();
        assert_eq!(s.t0, vec![0, 255]);
        assert_eq!(s.t1.len(), 8);
        assert!(seed_state(&SearchConfig::new(10, true)).is_err());
        assert!(seed_state(&SearchConfig::new(9, false)).is_err());
    }

    #[test]
    fn small_lengths() {
        let r = classify(&SearchConfig::new(2, false)).unwrap();
        assert_eq!(r.volumes(), vec![1]);
        let r = classify(&SearchConfig::new(4, false)).unwrap();
        assert_eq!(r.volumes(), vec![2]);
        let r = classify(&SearchConfig::new(6, false)).unwrap();
        assert_eq!(r.volumes(), vec![4]);
        let cfg = SearchConfig::new(6, false);
        let dc = double_count_validate(&r, &cfg).unwrap();
        assert!(dc.ok, "{dc:?}");
    }
}
